"""Instance file schema: JSON with top-level resources/deliverables/packets/dependencies.

Identifiers are strings, slots are integers. Parsing is strict (unknown keys
rejected) and dump -> load -> dump is byte-stable; entity lists are serialized
sorted by id and attribute sets sorted by (kind, name).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .domain import (
    Calendar,
    Deliverable,
    Dependency,
    DependencyKind,
    Instance,
    Resource,
    Skill,
    WorkPacket,
)


class InstanceParseError(ValueError):
    """Malformed instance document."""


def _require_keys(obj: dict[str, Any], where: str, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise InstanceParseError(f"{where}: expected an object")
    missing = required - obj.keys()
    if missing:
        raise InstanceParseError(f"{where}: missing key(s) {sorted(missing)}")
    unknown = obj.keys() - required - optional
    if unknown:
        raise InstanceParseError(f"{where}: unknown key(s) {sorted(unknown)}")


def _as_int(value: Any, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InstanceParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise InstanceParseError(f"{where}: expected a string, got {value!r}")
    return value


def _as_opt_int(value: Any, where: str) -> int | None:
    return None if value is None else _as_int(value, where)


def _parse_skills(values: Any, where: str) -> frozenset[Skill]:
    if not isinstance(values, list):
        raise InstanceParseError(f"{where}: expected a list of skills")
    skills = []
    for i, v in enumerate(values):
        _require_keys(v, f"{where}[{i}]", {"name", "kind"})
        skills.append(Skill(name=_as_str(v["name"], f"{where}[{i}].name"),
                            kind=_as_str(v["kind"], f"{where}[{i}].kind")))
    return frozenset(skills)


def _parse_calendar(value: Any, where: str) -> Calendar:
    if value is None:
        return Calendar()
    _require_keys(value, where, set(), {"unavailable_slots", "unavailable_from"})
    slots = value.get("unavailable_slots", [])
    if not isinstance(slots, list):
        raise InstanceParseError(f"{where}.unavailable_slots: expected a list")
    return Calendar(
        unavailable_slots=frozenset(_as_int(s, f"{where}.unavailable_slots") for s in slots),
        unavailable_from=_as_opt_int(value.get("unavailable_from"), f"{where}.unavailable_from"),
    )


def instance_from_dict(doc: dict[str, Any]) -> Instance:
    _require_keys(doc, "instance", {"resources", "deliverables", "packets", "dependencies"})

    resources = []
    for i, r in enumerate(doc["resources"]):
        where = f"resources[{i}]"
        _require_keys(r, where, {"id"}, {"attrs", "calendar", "is_dummy", "busy_until"})
        resources.append(Resource(
            id=_as_str(r["id"], f"{where}.id"),
            attrs=_parse_skills(r.get("attrs", []), f"{where}.attrs"),
            calendar=_parse_calendar(r.get("calendar"), f"{where}.calendar"),
            is_dummy=bool(r.get("is_dummy", False)),
            busy_until=_as_opt_int(r.get("busy_until"), f"{where}.busy_until"),
        ))

    deliverables = []
    for i, d in enumerate(doc["deliverables"]):
        where = f"deliverables[{i}]"
        _require_keys(d, where, {"id", "packet_ids", "input_start"},
                      {"committed_end", "priority", "preferred_end"})
        deliverables.append(Deliverable(
            id=_as_str(d["id"], f"{where}.id"),
            packet_ids=frozenset(_as_str(p, f"{where}.packet_ids") for p in d["packet_ids"]),
            input_start=_as_int(d["input_start"], f"{where}.input_start"),
            committed_end=_as_opt_int(d.get("committed_end"), f"{where}.committed_end"),
            priority=_as_int(d.get("priority", 1), f"{where}.priority"),
            preferred_end=_as_opt_int(d.get("preferred_end"), f"{where}.preferred_end"),
        ))

    packets = []
    for i, p in enumerate(doc["packets"]):
        where = f"packets[{i}]"
        _require_keys(p, where, {"id", "deliverable_id", "effort_hours"},
                      {"mandatory_attrs", "optional_attrs", "arrival_slot"})
        packets.append(WorkPacket(
            id=_as_str(p["id"], f"{where}.id"),
            deliverable_id=_as_str(p["deliverable_id"], f"{where}.deliverable_id"),
            effort_hours=_as_int(p["effort_hours"], f"{where}.effort_hours"),
            mandatory_attrs=_parse_skills(p.get("mandatory_attrs", []), f"{where}.mandatory_attrs"),
            optional_attrs=_parse_skills(p.get("optional_attrs", []), f"{where}.optional_attrs"),
            arrival_slot=_as_int(p.get("arrival_slot", 0), f"{where}.arrival_slot"),
        ))

    dependencies = []
    for i, dep in enumerate(doc["dependencies"]):
        where = f"dependencies[{i}]"
        _require_keys(dep, where, {"from_packet", "to_packet"}, {"kind"})
        kind_raw = dep.get("kind", DependencyKind.FINISH_TO_START.value)
        try:
            kind = DependencyKind(_as_str(kind_raw, f"{where}.kind"))
        except ValueError:
            raise InstanceParseError(f"{where}.kind: unknown dependency kind {kind_raw!r}") from None
        dependencies.append(Dependency(
            from_packet=_as_str(dep["from_packet"], f"{where}.from_packet"),
            to_packet=_as_str(dep["to_packet"], f"{where}.to_packet"),
            kind=kind,
        ))

    return Instance(
        resources=tuple(resources),
        deliverables=tuple(deliverables),
        packets=tuple(packets),
        dependencies=tuple(dependencies),
    )


def _skills_to_list(skills: frozenset[Skill]) -> list[dict[str, str]]:
    return [{"kind": s.kind, "name": s.name} for s in sorted(skills, key=lambda s: (s.kind, s.name))]


def instance_to_dict(instance: Instance) -> dict[str, Any]:
    return {
        "resources": [
            {
                "id": r.id,
                "attrs": _skills_to_list(r.attrs),
                "calendar": {
                    "unavailable_slots": sorted(r.calendar.unavailable_slots),
                    "unavailable_from": r.calendar.unavailable_from,
                },
                "is_dummy": r.is_dummy,
                "busy_until": r.busy_until,
            }
            for r in sorted(instance.resources, key=lambda r: r.id)
        ],
        "deliverables": [
            {
                "id": d.id,
                "packet_ids": sorted(d.packet_ids),
                "input_start": d.input_start,
                "committed_end": d.committed_end,
                "priority": d.priority,
                "preferred_end": d.preferred_end,
            }
            for d in sorted(instance.deliverables, key=lambda d: d.id)
        ],
        "packets": [
            {
                "id": p.id,
                "deliverable_id": p.deliverable_id,
                "effort_hours": p.effort_hours,
                "mandatory_attrs": _skills_to_list(p.mandatory_attrs),
                "optional_attrs": _skills_to_list(p.optional_attrs),
                "arrival_slot": p.arrival_slot,
            }
            for p in sorted(instance.packets, key=lambda p: p.id)
        ],
        "dependencies": [
            {"from_packet": dep.from_packet, "to_packet": dep.to_packet, "kind": dep.kind.value}
            for dep in sorted(instance.dependencies,
                              key=lambda dep: (dep.from_packet, dep.to_packet, dep.kind.value))
        ],
    }


def load_instance(path: str | Path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path}: invalid JSON: {exc}") from None
    return instance_from_dict(doc)


def dump_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(instance))


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n"

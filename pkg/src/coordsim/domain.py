"""Core data model: skills, work packets, deliverables, resources, schedules.

Time is discrete: one slot is one hour of simulated wall-clock time, and every
date-like field (input start, committed end, assignment start/end) is a slot
index. Assignment end slots are exclusive. All values are immutable after
construction; derived views (occupancy, deliverable windows) are computed, not
stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

SKILL_KINDS = ("role", "location", "skill", "project", "application", "tool", "account")

DEFAULT_MAX_PRIORITY = 3

# Cost-matrix sentinel for pairs that must never be matched. Kept as +inf (not
# a large finite float) and screened out before any solver arithmetic.
INFEASIBLE = math.inf


class UnknownEntityError(KeyError):
    """A schedule or event referenced an id absent from the instance."""


class DependencyKind(str, Enum):
    FINISH_TO_START = "finish_to_start"
    START_TO_START = "start_to_start"
    FINISH_TO_FINISH = "finish_to_finish"
    START_TO_FINISH = "start_to_finish"


@dataclass(frozen=True, order=True)
class Skill:
    """A named attribute of kind role/location/skill/project/application/tool/account."""

    name: str
    kind: str


@dataclass(frozen=True)
class Calendar:
    """Hour-slot availability map: available everywhere except explicit holiday
    slots and, once a resource browns out, every slot from `unavailable_from` on.
    Total over all slot indices, so it is defined up to any planning horizon.
    """

    unavailable_slots: frozenset[int] = frozenset()
    unavailable_from: int | None = None

    def is_available(self, slot: int) -> bool:
        if self.unavailable_from is not None and slot >= self.unavailable_from:
            return False
        return slot not in self.unavailable_slots

    def is_fully_open(self) -> bool:
        return not self.unavailable_slots and self.unavailable_from is None

    def count_available(self, start: int, end: int) -> int:
        """Number of available slots in [start, end)."""
        if end <= start:
            return 0
        if self.unavailable_from is not None:
            end = min(end, self.unavailable_from)
            if end <= start:
                return 0
        n = end - start
        if self.unavailable_slots:
            n -= sum(1 for s in self.unavailable_slots if start <= s < end)
        return n

    def end_for_effort(self, start: int, effort: int, limit: int) -> int | None:
        """Smallest exclusive end e such that [start, e) holds `effort` available
        slots, or None if that many are not reachable with e <= limit.
        """
        if effort <= 0:
            return start
        hard_limit = limit
        if self.unavailable_from is not None:
            hard_limit = min(hard_limit, self.unavailable_from)
        if not self.unavailable_slots:
            e = start + effort
            return e if e <= hard_limit else None
        remaining = effort
        slot = start
        while slot < hard_limit:
            if slot not in self.unavailable_slots:
                remaining -= 1
                if remaining == 0:
                    return slot + 1
            slot += 1
        return None

    def next_available(self, slot: int, limit: int) -> int | None:
        """First available slot at or after `slot`, or None if none before limit."""
        s = slot
        while s < limit:
            if self.is_available(s):
                return s
            s += 1
        return None


@dataclass(frozen=True)
class WorkPacket:
    """Atomic unit of assignable work, routed whole to a single resource."""

    id: str
    deliverable_id: str
    effort_hours: int
    mandatory_attrs: frozenset[Skill] = frozenset()
    optional_attrs: frozenset[Skill] = frozenset()
    arrival_slot: int = 0


@dataclass(frozen=True)
class Dependency:
    from_packet: str
    to_packet: str
    kind: DependencyKind = DependencyKind.FINISH_TO_START


@dataclass(frozen=True)
class Deliverable:
    """Customer-facing unit made of work packets.

    `committed_end` is a hard deadline and may be absent for fresh work.
    `preferred_end` is the generator's preferred completion date; it is
    metadata used by tardiness metrics only and never constrains scheduling.
    """

    id: str
    packet_ids: frozenset[str]
    input_start: int
    committed_end: int | None = None
    priority: int = 1
    preferred_end: int | None = None


@dataclass(frozen=True)
class Resource:
    """A worker: attribute set, availability calendar, and in-progress state.

    `busy_until` is controller state (exclusive end slot of the packet being
    worked); instances loaded from files normally carry None. A dummy resource
    stands for capacity not yet hired and must have a fully open calendar.
    """

    id: str
    attrs: frozenset[Skill] = frozenset()
    calendar: Calendar = field(default_factory=Calendar)
    is_dummy: bool = False
    busy_until: int | None = None


@dataclass(frozen=True, order=True)
class Assignment:
    """One packet on one resource over [start_slot, end_slot).

    The packet occupies every available calendar slot of the resource inside
    its interval; spans across holidays stretch end_slot instead of shrinking
    the worked hours.
    """

    packet_id: str
    resource_id: str
    start_slot: int
    end_slot: int


@dataclass(frozen=True)
class Instance:
    """A validated-or-validatable problem instance (the unit instance files hold)."""

    resources: tuple[Resource, ...] = ()
    deliverables: tuple[Deliverable, ...] = ()
    packets: tuple[WorkPacket, ...] = ()
    dependencies: tuple[Dependency, ...] = ()

    @cached_property
    def resource_by_id(self) -> dict[str, Resource]:
        return {r.id: r for r in self.resources}

    @cached_property
    def packet_by_id(self) -> dict[str, WorkPacket]:
        return {p.id: p for p in self.packets}

    @cached_property
    def deliverable_by_id(self) -> dict[str, Deliverable]:
        return {d.id: d for d in self.deliverables}

    @cached_property
    def deps_by_successor(self) -> dict[str, tuple[Dependency, ...]]:
        out: dict[str, list[Dependency]] = {}
        for dep in self.dependencies:
            out.setdefault(dep.to_packet, []).append(dep)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def deps_by_predecessor(self) -> dict[str, tuple[Dependency, ...]]:
        out: dict[str, list[Dependency]] = {}
        for dep in self.dependencies:
            out.setdefault(dep.from_packet, []).append(dep)
        return {k: tuple(v) for k, v in out.items()}


@dataclass(frozen=True)
class Schedule:
    """A work-system plan: a set of assignments, at most one per packet.

    Held as a tuple so that malformed plans (the same packet assigned twice)
    can be represented and reported by check_schedule rather than silently
    collapsed by a map.
    """

    assignments: tuple[Assignment, ...] = ()

    @cached_property
    def by_packet(self) -> dict[str, Assignment]:
        return {a.packet_id: a for a in self.assignments}

    def deliverable_window(self, instance: Instance, deliverable_id: str) -> tuple[int, int] | None:
        """(start, end) over the deliverable's scheduled members, or None if none scheduled."""
        deliv = instance.deliverable_by_id[deliverable_id]
        starts: list[int] = []
        ends: list[int] = []
        for pid in deliv.packet_ids:
            a = self.by_packet.get(pid)
            if a is not None:
                starts.append(a.start_slot)
                ends.append(a.end_slot)
        if not starts:
            return None
        return min(starts), max(ends)

    def occupancy(self, instance: Instance) -> dict[tuple[str, int], str]:
        """Map (resource_id, slot) -> packet_id over every worked (available) slot."""
        occ: dict[tuple[str, int], str] = {}
        for a in self.assignments:
            cal = instance.resource_by_id[a.resource_id].calendar
            for slot in range(a.start_slot, a.end_slot):
                if cal.is_available(slot):
                    occ[(a.resource_id, slot)] = a.packet_id
        return occ


@dataclass(frozen=True)
class CostMatrix:
    """Rectangular nonnegative cost table; INFEASIBLE entries mark forbidden pairs.

    Rows are candidate packets, columns resources; `row_ids`/`col_ids` are
    optional labels used by callers to map index pairs back to entities.
    """

    entries: tuple[tuple[float, ...], ...]
    row_ids: tuple[str, ...] = ()
    col_ids: tuple[str, ...] = ()

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @staticmethod
    def from_rows(rows: list[list[float]], row_ids: tuple[str, ...] = (),
                  col_ids: tuple[str, ...] = ()) -> "CostMatrix":
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("cost matrix must be rectangular")
        return CostMatrix(entries=tuple(tuple(float(x) for x in r) for r in rows),
                          row_ids=row_ids, col_ids=col_ids)


@dataclass(frozen=True, order=True)
class Violation:
    """One broken invariant or constraint, named by its constraint label."""

    constraint: str
    entity: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.constraint}] {self.entity}: {self.detail}"


def _dependency_cycles(deliverable: Deliverable, deps: list[Dependency]) -> list[str]:
    """Packets of `deliverable` that sit on a dependency cycle (DFS three-color)."""
    succ: dict[str, list[str]] = {pid: [] for pid in deliverable.packet_ids}
    for dep in deps:
        if dep.from_packet in succ and dep.to_packet in succ:
            succ[dep.from_packet].append(dep.to_packet)
    color: dict[str, int] = {pid: 0 for pid in succ}  # 0 white, 1 gray, 2 black
    on_cycle: set[str] = set()

    def visit(node: str, stack: list[str]) -> None:
        color[node] = 1
        stack.append(node)
        for nxt in succ[node]:
            if color[nxt] == 0:
                visit(nxt, stack)
            elif color[nxt] == 1:
                on_cycle.update(stack[stack.index(nxt):])
        stack.pop()
        color[node] = 2

    for pid in sorted(succ):
        if color[pid] == 0:
            visit(pid, [])
    return sorted(on_cycle)


def validate_instance(
    deliverables: tuple[Deliverable, ...] | list[Deliverable],
    packets: tuple[WorkPacket, ...] | list[WorkPacket],
    dependencies: tuple[Dependency, ...] | list[Dependency],
    resources: tuple[Resource, ...] | list[Resource],
    max_priority: int = DEFAULT_MAX_PRIORITY,
) -> list[Violation]:
    """Check every type invariant of the data model; violations are data, not errors.

    Returns a sorted list so the output is order-insensitive in its inputs.
    """
    out: list[Violation] = []
    deliv_ids = {d.id for d in deliverables}
    packet_ids = {p.id for p in packets}

    for kind, items in (("deliverable", deliverables), ("packet", packets), ("resource", resources)):
        seen: set[str] = set()
        for item in items:
            if item.id in seen:
                out.append(Violation("unique-id", f"{kind}:{item.id}", "duplicate id"))
            seen.add(item.id)

    for p in packets:
        if p.effort_hours < 1:
            out.append(Violation("effort-positivity", f"packet:{p.id}",
                                 f"effort_hours={p.effort_hours}, must be >= 1"))
        if p.deliverable_id not in deliv_ids:
            out.append(Violation("packet-deliverable-exists", f"packet:{p.id}",
                                 f"unknown deliverable {p.deliverable_id!r}"))
        n_roles = sum(1 for s in p.mandatory_attrs if s.kind == "role")
        n_locs = sum(1 for s in p.mandatory_attrs if s.kind == "location")
        if n_roles != 1 or n_locs != 1:
            out.append(Violation("mandatory-role-location", f"packet:{p.id}",
                                 f"needs exactly one role and one location, got {n_roles} role(s), {n_locs} location(s)"))
        for s in p.mandatory_attrs | p.optional_attrs:
            if s.kind not in SKILL_KINDS:
                out.append(Violation("skill-kind", f"packet:{p.id}", f"unknown skill kind {s.kind!r}"))
        if p.arrival_slot < 0:
            out.append(Violation("slot-nonnegative", f"packet:{p.id}", "arrival_slot < 0"))

    for d in deliverables:
        if not d.packet_ids:
            out.append(Violation("deliverable-nonempty", f"deliverable:{d.id}", "no member packets"))
        for pid in sorted(d.packet_ids):
            if pid not in packet_ids:
                out.append(Violation("deliverable-member-exists", f"deliverable:{d.id}",
                                     f"unknown packet {pid!r}"))
        if d.committed_end is not None and d.committed_end <= d.input_start:
            out.append(Violation("committed-after-start", f"deliverable:{d.id}",
                                 f"committed_end={d.committed_end} <= input_start={d.input_start}"))
        if not 1 <= d.priority <= max_priority:
            out.append(Violation("priority-range", f"deliverable:{d.id}",
                                 f"priority={d.priority} outside 1..{max_priority}"))
        if d.input_start < 0:
            out.append(Violation("slot-nonnegative", f"deliverable:{d.id}", "input_start < 0"))

    by_deliv: dict[str, str] = {p.id: p.deliverable_id for p in packets}
    for d in deliverables:
        for pid in sorted(d.packet_ids):
            if pid in by_deliv and by_deliv[pid] != d.id:
                out.append(Violation("membership-consistent", f"deliverable:{d.id}",
                                     f"packet {pid!r} claims deliverable {by_deliv[pid]!r}"))

    for dep in dependencies:
        if dep.from_packet == dep.to_packet:
            out.append(Violation("dependency-self", f"dependency:{dep.from_packet}", "self-dependency"))
        for pid in (dep.from_packet, dep.to_packet):
            if pid not in packet_ids:
                out.append(Violation("dependency-endpoint", f"dependency:{dep.from_packet}->{dep.to_packet}",
                                     f"unknown packet {pid!r}"))

    dep_list = list(dependencies)
    for d in deliverables:
        for pid in _dependency_cycles(d, dep_list):
            out.append(Violation("acyclicity", f"packet:{pid}",
                                 f"on a dependency cycle within deliverable {d.id!r}"))

    for r in resources:
        if r.is_dummy and not r.calendar.is_fully_open():
            out.append(Violation("dummy-calendar", f"resource:{r.id}",
                                 "dummy resources must have a fully open calendar"))
        if r.busy_until is not None and r.busy_until < 0:
            out.append(Violation("slot-nonnegative", f"resource:{r.id}", "busy_until < 0"))
        for s in r.attrs:
            if s.kind not in SKILL_KINDS:
                out.append(Violation("skill-kind", f"resource:{r.id}", f"unknown skill kind {s.kind!r}"))

    return sorted(out)


_DEP_RULES = {
    # kind -> (value taken from predecessor, value taken from successor, relation text)
    DependencyKind.FINISH_TO_START: ("end", "start"),
    DependencyKind.START_TO_START: ("start", "start"),
    DependencyKind.FINISH_TO_FINISH: ("end", "end"),
    DependencyKind.START_TO_FINISH: ("start", "end"),
}


def check_schedule(schedule: Schedule, instance: Instance) -> list[Violation]:
    """Check a (possibly partial) schedule against the full constraint set.

    Violations carry the constraint labels of the scheduling program:
    matching-location-and-role, one-packet-to-one-resource,
    planned-end-accounts-for-effort, one-packet-at-a-time,
    sequential-dependency, start-after-input-start, end-obeys-committed-date.

    Raises UnknownEntityError if the schedule references ids that are not in
    the instance (that is malformed input, not a constraint violation).
    """
    for a in schedule.assignments:
        if a.packet_id not in instance.packet_by_id:
            raise UnknownEntityError(f"unknown packet {a.packet_id!r} in schedule")
        if a.resource_id not in instance.resource_by_id:
            raise UnknownEntityError(f"unknown resource {a.resource_id!r} in schedule")

    out: list[Violation] = []

    seen_packets: set[str] = set()
    for a in schedule.assignments:
        if a.packet_id in seen_packets:
            out.append(Violation("one-packet-to-one-resource", f"packet:{a.packet_id}",
                                 "assigned more than once"))
        seen_packets.add(a.packet_id)

    for a in schedule.assignments:
        packet = instance.packet_by_id[a.packet_id]
        resource = instance.resource_by_id[a.resource_id]
        if a.end_slot <= a.start_slot or a.start_slot < 0:
            out.append(Violation("planned-end-accounts-for-effort", f"packet:{a.packet_id}",
                                 f"empty or negative span [{a.start_slot}, {a.end_slot})"))
            continue
        if not packet.mandatory_attrs <= resource.attrs:
            missing = sorted(f"{s.kind}:{s.name}" for s in packet.mandatory_attrs - resource.attrs)
            out.append(Violation("matching-location-and-role", f"packet:{a.packet_id}",
                                 f"resource {a.resource_id!r} lacks {', '.join(missing)}"))
        worked = resource.calendar.count_available(a.start_slot, a.end_slot)
        if worked < packet.effort_hours:
            out.append(Violation("planned-end-accounts-for-effort", f"packet:{a.packet_id}",
                                 f"{worked} available slot(s) in span, effort is {packet.effort_hours}"))

    # One packet at a time: no two packets may claim the same worked slot.
    claimed: dict[tuple[str, int], str] = {}
    overlapping: set[tuple[str, str]] = set()
    for a in sorted(schedule.assignments):
        cal = instance.resource_by_id[a.resource_id].calendar
        for slot in range(a.start_slot, a.end_slot):
            if not cal.is_available(slot):
                continue
            key = (a.resource_id, slot)
            if key in claimed and claimed[key] != a.packet_id:
                overlapping.add((claimed[key], a.packet_id))
            else:
                claimed[key] = a.packet_id
    for first, second in sorted(overlapping):
        out.append(Violation("one-packet-at-a-time", f"packet:{second}",
                             f"overlaps packet {first!r} on shared resource slots"))

    for dep in instance.dependencies:
        a_from = schedule.by_packet.get(dep.from_packet)
        a_to = schedule.by_packet.get(dep.to_packet)
        if a_from is None or a_to is None:
            continue
        from_field, to_field = _DEP_RULES[dep.kind]
        lhs = a_from.end_slot if from_field == "end" else a_from.start_slot
        rhs = a_to.end_slot if to_field == "end" else a_to.start_slot
        if lhs > rhs:
            out.append(Violation("sequential-dependency", f"packet:{dep.to_packet}",
                                 f"{dep.kind.value} with {dep.from_packet!r} broken ({from_field}={lhs} > {to_field}={rhs})"))

    for d in instance.deliverables:
        window = schedule.deliverable_window(instance, d.id)
        if window is None:
            continue
        start, end = window
        if start < d.input_start:
            out.append(Violation("start-after-input-start", f"deliverable:{d.id}",
                                 f"starts at {start}, input start is {d.input_start}"))
        if d.committed_end is not None and end > d.committed_end:
            out.append(Violation("end-obeys-committed-date", f"deliverable:{d.id}",
                                 f"ends at {end}, committed end is {d.committed_end}"))

    return sorted(out)

"""Hard-constraint eligibility and soft affinity scoring for (packet, resource) pairs.

Eligibility is the hard gate: a resource qualifies only if it carries every
mandatory attribute of the packet. The soft score then rewards matched
optional attributes, normalized so it lives in [0, 1] and hits 1 when every
optional attribute matches (or there are none). Dummy resources get a small
fixed score so they are picked only when nothing real fits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .domain import Instance, Resource, WorkPacket


@dataclass(frozen=True)
class AffinityConfig:
    """Weights for the optional-attribute match ratio.

    `kind_weights` maps an attribute kind (project, application, tool,
    account, skill, ...) to its weight; kinds not listed weigh 1.0.
    """

    base_weight: float = 1.0
    kind_weights: dict[str, float] = field(default_factory=dict)
    dummy_score: float = 0.01

    def weight_of(self, kind: str) -> float:
        return self.kind_weights.get(kind, 1.0)


def eligible_resources(packet: WorkPacket, resources: tuple[Resource, ...] | list[Resource]) -> set[str]:
    """Ids of resources carrying every mandatory attribute of the packet."""
    return {r.id for r in resources if packet.mandatory_attrs <= r.attrs}


def affinity_score(packet: WorkPacket, resource: Resource, config: AffinityConfig) -> float:
    """Soft match quality in [0, 1]; exactly 0 iff a mandatory attribute mismatches."""
    if not packet.mandatory_attrs <= resource.attrs:
        return 0.0
    total = config.base_weight + sum(config.weight_of(s.kind) for s in packet.optional_attrs)
    if total <= 0:
        return 1.0
    matched = config.base_weight + sum(
        config.weight_of(s.kind) for s in packet.optional_attrs if s in resource.attrs
    )
    return matched / total


@dataclass(frozen=True)
class AffinityMatrix:
    """Dense per-pair scores keyed by (packet_id, resource_id)."""

    scores: dict[tuple[str, str], float]

    def score(self, packet_id: str, resource_id: str) -> float:
        return self.scores.get((packet_id, resource_id), 0.0)

    def eligible(self, packet_id: str, resource_id: str) -> bool:
        return self.score(packet_id, resource_id) > 0.0


def build_affinity_matrix(
    packets: tuple[WorkPacket, ...] | list[WorkPacket],
    resources: tuple[Resource, ...] | list[Resource],
    config: AffinityConfig,
) -> AffinityMatrix:
    """Score every pair; dummy resources get the flat dummy score where eligible."""
    scores: dict[tuple[str, str], float] = {}
    for p in packets:
        for r in resources:
            if r.is_dummy:
                s = config.dummy_score if packet_is_eligible(p, r) else 0.0
            else:
                s = affinity_score(p, r, config)
            scores[(p.id, r.id)] = s
    return AffinityMatrix(scores=scores)


def packet_is_eligible(packet: WorkPacket, resource: Resource) -> bool:
    return packet.mandatory_attrs <= resource.attrs


def matrix_for_instance(instance: Instance, config: AffinityConfig) -> AffinityMatrix:
    return build_affinity_matrix(instance.packets, instance.resources, config)

"""Javadoc-style type buckets: scenarios grouped per API type, most
recent first."""

from __future__ import annotations

from dataclasses import dataclass

from .apidb import ApiRecord
from .miner import UsageScenario
from .stats import StarRating, type_star_rating


@dataclass(frozen=True)
class TypeBucket:
    api: str
    type_name: str
    fqn: str | None
    scenarios: tuple[UsageScenario, ...]
    rating: StarRating | None


def build_type_buckets(api: ApiRecord,
                       scenarios: list[UsageScenario]) -> list[TypeBucket]:
    """One bucket per API type used by at least one scenario.

    A scenario lands in every bucket whose type its snippet uses
    (locals were already excluded at parse time); buckets are keyed by
    FQN when resolvable so same-named types from other packages never
    merge. Buckets are ordered largest first, scenarios inside by
    recency.
    """
    members: dict[str, list[UsageScenario]] = {}
    for scenario in scenarios:
        for type_name in scenario.snippet.types_used:
            if type_name in api.types:
                members.setdefault(type_name, []).append(scenario)
    buckets = []
    for type_name, bucket_scenarios in members.items():
        ordered = sorted(bucket_scenarios,
                         key=lambda s: (s.created_at, s.post_id, s.id),
                         reverse=True)
        buckets.append(TypeBucket(
            api=api.name,
            type_name=type_name,
            fqn=api.fqn_of(type_name),
            scenarios=tuple(ordered),
            rating=type_star_rating(api, type_name, scenarios),
        ))
    buckets.sort(key=lambda b: (-len(b.scenarios), b.type_name))
    return buckets

"""Statistical documentation: sentiment overview, time series, co-usage
charts and star ratings over the mined scenarios of one API.

Ratings are stored as exact positive/negative counts; the real-valued
star value is derived on demand and rounded only in exports. A
scenario's opinions are all binned under the month of its post, not of
the individual comments.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .apidb import ApiDb, ApiRecord
from .miner import UsageScenario


@dataclass(frozen=True)
class StarRating:
    positives: int
    negatives: int

    @property
    def value(self) -> float:
        return 5.0 * self.positives / (self.positives + self.negatives)

    def to_json(self) -> dict:
        return {
            "value": round(self.value, 2),
            "positives": self.positives,
            "negatives": self.negatives,
        }


@dataclass(frozen=True)
class StatisticalSummary:
    api: str
    positive_total: int
    negative_total: int
    timeseries: tuple[tuple[str, int, int], ...]  # (YYYY-MM, pos, neg)
    co_used_apis: dict
    co_used_types: dict  # (type, other type) -> snippet count
    type_ratings: dict  # type -> StarRating

    def to_json(self) -> dict:
        return {
            "api": self.api,
            "positive_total": self.positive_total,
            "negative_total": self.negative_total,
            "overview": {
                "empty": self.positive_total + self.negative_total == 0,
                "positive": self.positive_total,
                "negative": self.negative_total,
            },
            "timeseries": {
                "empty": not self.timeseries,
                "points": [
                    {"month": month, "positive": pos, "negative": neg}
                    for month, pos, neg in self.timeseries
                ],
            },
            "co_used_apis": {
                "empty": not self.co_used_apis,
                "counts": {name: self.co_used_apis[name]
                           for name in sorted(self.co_used_apis)},
            },
            "co_used_types": {
                "empty": not self.co_used_types,
                "pairs": [
                    {"types": list(pair), "count": self.co_used_types[pair]}
                    for pair in sorted(self.co_used_types)
                ],
            },
            "type_ratings": {
                "empty": not self.type_ratings,
                "ratings": {name: self.type_ratings[name].to_json()
                            for name in sorted(self.type_ratings)},
            },
        }


def star_rating(positives: int, negatives: int) -> StarRating | None:
    """Five-star rating from review counts; absent when both are zero."""
    if positives < 0 or negatives < 0:
        raise ValueError("review counts must be non-negative")
    if positives + negatives == 0:
        return None
    return StarRating(positives=positives, negatives=negatives)


def sentiment_overview(scenarios: list[UsageScenario]) -> tuple[int, int]:
    positives = sum(len(s.positive_reviews()) for s in scenarios)
    negatives = sum(len(s.negative_reviews()) for s in scenarios)
    return positives, negatives


def _month_key(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).strftime("%Y-%m")


def _next_month(month: str) -> str:
    year, mon = int(month[:4]), int(month[5:7])
    if mon == 12:
        return f"{year + 1}-01"
    return f"{year}-{mon + 1:02d}"


def sentiment_timeseries(scenarios: list[UsageScenario]) -> list[tuple[str, int, int]]:
    """Monthly positive/negative opinion counts, zero-filled over the
    inclusive month range of the scenarios' post creation dates."""
    if not scenarios:
        return []
    months = {}
    for scenario in scenarios:
        key = _month_key(scenario.created_at)
        pos, neg = months.get(key, (0, 0))
        months[key] = (pos + len(scenario.positive_reviews()),
                       neg + len(scenario.negative_reviews()))
    first = min(months)
    last = max(months)
    series = []
    month = first
    while True:
        pos, neg = months.get(month, (0, 0))
        series.append((month, pos, neg))
        if month == last:
            break
        month = _next_month(month)
    return series


def co_used_apis(api: ApiRecord, scenarios: list[UsageScenario],
                 api_db: ApiDb) -> dict[str, int]:
    """Distinct count per code example of other APIs resolvable from the
    snippet's types and imports."""
    counts: dict[str, int] = {}
    for scenario in scenarios:
        snippet = scenario.snippet
        others: set[str] = set()
        for imp in snippet.imports:
            for record in api_db.apis_for_import(imp):
                others.add(record.name)
        for type_name in snippet.types_used:
            for record in api_db.apis_with_type(type_name):
                others.add(record.name)
        others.discard(api.name)
        for name in others:
            counts[name] = counts.get(name, 0) + 1
    return counts


def co_used_types(api: ApiRecord,
                  scenarios: list[UsageScenario]) -> dict[tuple[str, str], int]:
    """Symmetric counts of same-API type pairs co-used in one snippet."""
    counts: dict[tuple[str, str], int] = {}
    for scenario in scenarios:
        own_types = sorted(t for t in scenario.snippet.types_used if t in api.types)
        for i, first in enumerate(own_types):
            for second in own_types[i + 1:]:
                pair = (first, second)
                counts[pair] = counts.get(pair, 0) + 1
    return counts


def type_star_rating(api: ApiRecord, type_name: str,
                     scenarios: list[UsageScenario]) -> StarRating | None:
    """Eq-style rating over all reviews of scenarios using the type."""
    positives = 0
    negatives = 0
    for scenario in scenarios:
        if type_name not in scenario.snippet.types_used:
            continue
        positives += len(scenario.positive_reviews())
        negatives += len(scenario.negative_reviews())
    return star_rating(positives, negatives)


def build_statistical_summary(api: ApiRecord, scenarios: list[UsageScenario],
                              api_db: ApiDb) -> StatisticalSummary:
    positives, negatives = sentiment_overview(scenarios)
    used_types = sorted({t for s in scenarios
                         for t in s.snippet.types_used if t in api.types})
    type_ratings = {}
    for type_name in used_types:
        rating = type_star_rating(api, type_name, scenarios)
        if rating is not None:
            type_ratings[type_name] = rating
    return StatisticalSummary(
        api=api.name,
        positive_total=positives,
        negative_total=negatives,
        timeseries=tuple(sentiment_timeseries(scenarios)),
        co_used_apis=co_used_apis(api, scenarios, api_db),
        co_used_types=co_used_types(api, scenarios),
        type_ratings=type_ratings,
    )

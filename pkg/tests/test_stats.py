from __future__ import annotations

from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenariodoc.opinions import Opinion, Polarity, Sentence
from scenariodoc.stats import (build_statistical_summary, co_used_apis,
                               co_used_types, sentiment_overview,
                               sentiment_timeseries, star_rating,
                               type_star_rating)

from conftest import scenarios_for
from test_concepts import make_scenario


def opinion(polarity: str) -> Opinion:
    sign = 1.0 if polarity == "positive" else -1.0
    return Opinion(sentence=Sentence(text="x"), polarity=Polarity(polarity),
                   score=sign * 2)


def at(year: int, month: int, day: int = 1) -> datetime:
    return datetime(year, month, day, tzinfo=timezone.utc)


# --- star ratings -----------------------------------------------------------------

def test_all_positive_saturates_scale():
    assert star_rating(10, 0).value == 5.0


def test_paper_scale_counts():
    rating = star_rating(2487, 1216)
    assert rating.value == pytest.approx(5 * 2487 / (2487 + 1216))
    assert rating.value == pytest.approx(3.358, abs=0.001)


def test_zero_counts_is_absent():
    assert star_rating(0, 0) is None


def test_negative_counts_rejected():
    with pytest.raises(ValueError):
        star_rating(-1, 2)


@settings(max_examples=100, deadline=None)
@given(p=st.integers(0, 500), n=st.integers(0, 500), k=st.integers(1, 9))
def test_star_rating_scale_free(p, n, k):
    base = star_rating(p, n)
    scaled = star_rating(k * p, k * n)
    if base is None:
        assert scaled is None
    else:
        assert scaled.value == pytest.approx(base.value)
        assert 0.0 <= base.value <= 5.0


def test_rating_export_rounds_to_two_decimals():
    assert star_rating(2487, 1216).to_json() == {
        "value": 3.36, "positives": 2487, "negatives": 1216}


# --- overview ----------------------------------------------------------------------

def test_overview_adds_review_counts():
    scenarios = [
        make_scenario("a", {"T"}, reviews=[opinion("positive")] * 3 + [opinion("negative")]),
        make_scenario("b", {"T"}, reviews=[opinion("negative")] * 2),
    ]
    assert sentiment_overview(scenarios) == (3, 3)


def test_overview_empty():
    assert sentiment_overview([]) == (0, 0)


def test_overview_matches_recount(scenarios):
    for api in ("jackson", "Google Gson"):
        subset = scenarios_for(scenarios, api)
        pos, neg = sentiment_overview(subset)
        raw_pos = sum(1 for s in subset for o in s.reviews if o.polarity is Polarity.POSITIVE)
        raw_neg = sum(1 for s in subset for o in s.reviews if o.polarity is Polarity.NEGATIVE)
        assert (pos, neg) == (raw_pos, raw_neg)


# --- timeseries ----------------------------------------------------------------------

def test_timeseries_zero_fills_middle_months():
    scenarios = [
        make_scenario("a", {"T"}, created=at(2014, 3, 20),
                      reviews=[opinion("positive"), opinion("positive")]),
        make_scenario("b", {"T"}, created=at(2014, 5, 8),
                      reviews=[opinion("negative")]),
    ]
    assert sentiment_timeseries(scenarios) == [
        ("2014-03", 2, 0), ("2014-04", 0, 0), ("2014-05", 0, 1)]


def test_timeseries_single_month():
    scenarios = [make_scenario("a", {"T"}, created=at(2016, 7),
                               reviews=[opinion("positive")])]
    assert sentiment_timeseries(scenarios) == [("2016-07", 1, 0)]


def test_timeseries_crosses_year_boundary():
    scenarios = [
        make_scenario("a", {"T"}, created=at(2014, 11)),
        make_scenario("b", {"T"}, created=at(2015, 2)),
    ]
    months = [m for m, _, _ in sentiment_timeseries(scenarios)]
    assert months == ["2014-11", "2014-12", "2015-01", "2015-02"]


def test_timeseries_sums_equal_overview(scenarios):
    for api in ("jackson", "Google Gson", "org.json", "java.util"):
        subset = scenarios_for(scenarios, api)
        series = sentiment_timeseries(subset)
        pos, neg = sentiment_overview(subset)
        assert sum(p for _, p, _ in series) == pos
        assert sum(n for _, _, n in series) == neg


def test_timeseries_bins_by_post_month_not_comment_month(scenarios):
    # t9/a91 was posted 2014-03; its review comment is from 2014-03-21 but
    # binning must follow the post either way; a92's comment is 2014-05-09.
    gson = scenarios_for(scenarios, "Google Gson", thread="t9")
    series = dict((m, (p, n)) for m, p, n in sentiment_timeseries(gson))
    assert series["2014-03"] == (2, 0)
    assert series["2014-04"] == (0, 0)
    assert series["2014-05"] == (0, 1)


# --- co-usage --------------------------------------------------------------------------

def test_javaxws_counted_alongside_jackson(scenarios, api_db):
    jackson = api_db.get("jackson")
    counts = co_used_apis(jackson, scenarios_for(scenarios, "jackson"), api_db)
    assert counts.get("javax.ws", 0) >= 1


def test_co_used_apis_never_contains_self(scenarios, api_db):
    for name in ("jackson", "Google Gson", "org.json", "java.util"):
        record = api_db.get(name)
        counts = co_used_apis(record, scenarios_for(scenarios, name), api_db)
        assert name not in counts


def test_snippet_using_only_own_api_contributes_nothing(api_db):
    record = api_db.get("org.json")
    scenario = make_scenario("s", {"JSONObject", "JSONArray"})
    assert co_used_apis(record, [scenario], api_db) == {}


def test_co_used_apis_matches_brute_force(scenarios, api_db):
    jackson = api_db.get("jackson")
    subset = scenarios_for(scenarios, "jackson")
    counts = co_used_apis(jackson, subset, api_db)
    expected: dict[str, int] = {}
    for scenario in subset:
        seen = set()
        for record in api_db:
            if record.name == "jackson":
                continue
            type_hit = any(t in record.types for t in scenario.snippet.types_used)
            import_hit = any(
                imp.rstrip(".*").rstrip(".").startswith(p) or
                imp.startswith(p + ".") or imp == p
                for imp in scenario.snippet.imports for p in record.packages)
            if type_hit or import_hit:
                seen.add(record.name)
        for name in seen:
            expected[name] = expected.get(name, 0) + 1
    assert counts == expected


def test_co_used_types_counts_pairs(scenarios, api_db):
    jackson = api_db.get("jackson")
    counts = co_used_types(jackson, scenarios_for(scenarios, "jackson"))
    assert counts[("ObjectMapper", "XmlMapper")] == 2  # S2 and S5
    assert counts[("JsonFactory", "JsonParser")] == 3
    assert all(a < b for a, b in counts)


def test_single_type_snippet_has_no_pairs(api_db):
    gson = api_db.get("Google Gson")
    assert co_used_types(gson, [make_scenario("s", {"Gson"})]) == {}


def test_co_used_types_matches_pair_enumeration(scenarios, api_db):
    from itertools import combinations
    jackson = api_db.get("jackson")
    subset = scenarios_for(scenarios, "jackson")
    counts = co_used_types(jackson, subset)
    expected: dict[tuple[str, str], int] = {}
    for scenario in subset:
        own = sorted(t for t in scenario.snippet.types_used if t in jackson.types)
        for pair in combinations(own, 2):
            expected[pair] = expected.get(pair, 0) + 1
    assert counts == expected


# --- type ratings -------------------------------------------------------------------------

def test_type_rating_aggregates_scenarios(api_db):
    jackson = api_db.get("jackson")
    scenarios = [
        make_scenario("a", {"ObjectMapper"},
                      reviews=[opinion("positive")] * 4 + [opinion("negative")]),
        make_scenario("b", {"XmlMapper"}, reviews=[opinion("negative")]),
    ]
    for s in scenarios:
        object.__setattr__(s, "snippet", s.snippet)
    rating = type_star_rating(jackson, "ObjectMapper", scenarios)
    assert rating.value == 4.0
    assert type_star_rating(jackson, "JsonNode", scenarios) is None


def test_summary_invariants(scenarios, api_db):
    for name in ("jackson", "Google Gson", "org.json", "java.util"):
        record = api_db.get(name)
        subset = scenarios_for(scenarios, name)
        summary = build_statistical_summary(record, subset, api_db)
        assert summary.positive_total == sum(p for _, p, _ in summary.timeseries)
        assert summary.negative_total == sum(n for _, _, n in summary.timeseries)
        assert record.name not in summary.co_used_apis
        payload = summary.to_json()
        assert payload["overview"]["empty"] == (
            summary.positive_total + summary.negative_total == 0)
        for chart in ("timeseries", "co_used_apis", "co_used_types", "type_ratings"):
            assert "empty" in payload[chart]


def test_empty_summary_emits_empty_flags(api_db):
    record = api_db.get("org.json")
    summary = build_statistical_summary(record, [], api_db)
    payload = summary.to_json()
    assert payload["overview"]["empty"]
    assert payload["timeseries"]["empty"]
    assert payload["co_used_apis"]["empty"]

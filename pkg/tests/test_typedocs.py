from __future__ import annotations

import pytest

from scenariodoc.typedocs import build_type_buckets

from conftest import scenarios_for
from test_concepts import make_scenario


def test_fig2_buckets_gson_and_typetoken(scenarios, api_db):
    gson = api_db.get("Google Gson")
    vignette = scenarios_for(scenarios, "Google Gson", thread="t1")
    buckets = build_type_buckets(gson, vignette)
    names = {b.type_name for b in buckets}
    assert names == {"Gson", "TypeToken"}  # Data is local, List/Type not Gson's
    by_name = {b.type_name: b for b in buckets}
    assert by_name["Gson"].fqn == "com.google.gson.Gson"


def test_no_scenarios_no_buckets(api_db):
    assert build_type_buckets(api_db.get("jackson"), []) == []


def test_jsonobject_bucket_is_largest(scenarios, api_db):
    orgjson = api_db.get("org.json")
    buckets = build_type_buckets(orgjson, scenarios_for(scenarios, "org.json"))
    assert buckets[0].type_name == "JSONObject"
    assert len(buckets[0].scenarios) == 2
    sizes = [len(b.scenarios) for b in buckets]
    assert sizes == sorted(sizes, reverse=True)


def test_bucket_membership_means_type_usage(scenarios, api_db):
    for api_name in ("jackson", "Google Gson", "org.json", "java.util"):
        record = api_db.get(api_name)
        subset = scenarios_for(scenarios, api_name)
        for bucket in build_type_buckets(record, subset):
            for scenario in bucket.scenarios:
                assert bucket.type_name in scenario.snippet.types_used


def test_buckets_cover_every_scenario_with_api_types(scenarios, api_db):
    for api_name in ("jackson", "Google Gson", "org.json", "java.util"):
        record = api_db.get(api_name)
        subset = scenarios_for(scenarios, api_name)
        buckets = build_type_buckets(record, subset)
        covered = {s.id for b in buckets for s in b.scenarios}
        expected = {s.id for s in subset
                    if any(t in record.types for t in s.snippet.types_used)}
        assert covered == expected


def test_bucket_scenarios_most_recent_first(scenarios, api_db):
    jackson = api_db.get("jackson")
    for bucket in build_type_buckets(jackson, scenarios_for(scenarios, "jackson")):
        times = [s.created_at for s in bucket.scenarios]
        assert times == sorted(times, reverse=True)


def test_multi_type_scenario_lands_in_every_bucket(api_db):
    jackson = api_db.get("jackson")
    scenario = make_scenario("multi", {"ObjectMapper", "XmlMapper"})
    buckets = build_type_buckets(jackson, [scenario])
    assert {b.type_name for b in buckets} == {"ObjectMapper", "XmlMapper"}
    assert all(b.scenarios == (scenario,) for b in buckets)


def test_bucket_rating_uses_type_scenarios_only(api_db):
    from test_stats import opinion

    jackson = api_db.get("jackson")
    with_reviews = make_scenario("a", {"ObjectMapper"},
                                 reviews=[opinion("positive")] * 4 + [opinion("negative")])
    silent = make_scenario("b", {"XmlMapper"})
    buckets = {b.type_name: b for b in build_type_buckets(jackson, [with_reviews, silent])}
    assert buckets["ObjectMapper"].rating.value == 4.0
    assert buckets["XmlMapper"].rating is None

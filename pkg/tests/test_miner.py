from __future__ import annotations

import json
from pathlib import Path

import pytest

from scenariodoc.corpus import Corpus
from scenariodoc.miner import (associate_reviews, generate_description,
                               link_snippet_to_api, mine, read_scenarios,
                               scenario_from_json, scenario_to_json,
                               write_scenarios)
from scenariodoc.opinions import tokenize_sentences
from scenariodoc.snippets import RawSnippet, parse_java_elements

from conftest import scenarios_for

FIXTURES = Path(__file__).parent / "fixtures"


def parsed(code: str, post_id: str = "p"):
    return parse_java_elements(RawSnippet(post_id=post_id, text=code, char_span=(0, 1)))


# --- linking --------------------------------------------------------------------

FIG2_CODE = """Type listType = new TypeToken<List<Data>>() {}.getType();
List<Data> yourList = new Gson().fromJson(jsonArray, listType);

class Data {
    int id;
    String name;
}"""

FIG2_TEXTS = [
    "You can use the Google Gson library to convert JSON into a list of Java objects.",
    "Google Gson supports generics and nested beans, so the conversion below stays a one-liner.",
    "I had trouble with Jackson for this use case.",
    "If you don't need object deserialization and just want to read values, you can try org.json instead.",
]


def test_fig2_links_to_gson_not_java_builtin(api_db):
    linked = link_snippet_to_api(parsed(FIG2_CODE), FIG2_TEXTS, api_db)
    assert linked is not None
    api, score = linked
    assert api.name == "Google Gson"
    assert score > 0.2


def test_local_only_snippet_links_nowhere(api_db):
    code = "class Helper {\n    void run() {\n        step();\n    }\n}"
    assert link_snippet_to_api(parsed(code), ["Use Gson for this."], api_db) is None


def test_below_floor_yields_none(api_db):
    # One unknown type, no mention anywhere: best score is 0.
    code = "Widget w = new Widget();\nw.spin();"
    assert link_snippet_to_api(parsed(code), ["no api words here"], api_db) is None


LINK_CASES = [
    ("Gson g = new Gson();\nString s = g.toJson(x);", ["Serialize with Gson."], "Google Gson"),
    ("ObjectMapper m = new ObjectMapper();\nJsonNode n = m.readTree(b);", ["Jackson does this."], "jackson"),
    ("JSONObject o = new JSONObject(s);\nString v = o.getString(k);", ["Plain org.json works."], "org.json"),
    ("List<String> xs = new ArrayList<>();\nxs.add(s);", ["Stick to java.util here."], "java.util"),
    ("BufferedReader r = new BufferedReader(new FileReader(f));\nString l = r.readLine();",
     ["Read it with java.io streams."], "java.io"),
    ("XmlMapper xm = new XmlMapper();\nString x = xm.writeValueAsString(o);",
     ["The Jackson XML module handles it."], "jackson"),
    ("JsonFactory f = new JsonFactory();\nJsonParser p = f.createParser(in);",
     ["Jackson streaming is fastest."], "jackson"),
    ("GsonBuilder b = new GsonBuilder();\nGson g = b.setPrettyPrinting().create();",
     ["Configure gson with the builder."], "Google Gson"),
    ("JSONArray a = new JSONArray(s);\nJSONObject first = a.getJSONObject(0);",
     ["org.json arrays are index based."], "org.json"),
    ("HashMap<String, Integer> m = new HashMap<>();\nm.put(k, v);",
     ["A java.util map suffices."], "java.util"),
    ("TypeToken<List<Data>> t = new TypeToken<List<Data>>() {};\nType ty = t.getType();",
     ["Gson type tokens capture generics."], "Google Gson"),
    ("ObjectWriter w = mapper.writer();\nString s = w.writeValueAsString(o);",
     ["Jackson's writer can pretty print."], "jackson"),
    ("File f = new File(path);\nFileWriter w = new FileWriter(f);\nw.write(data);",
     ["Write it with java.io."], "java.io"),
    ("Scanner sc = new Scanner(file);\nString line = sc.nextLine();",
     ["A java.util Scanner is enough."], "java.util"),
    ("JsonElement e = parser.parse(s);\nJsonObject o = e.getAsJsonObject();",
     ["Gson's tree model is JsonElement based."], "Google Gson"),
    ("JsonGenerator g = factory.createGenerator(out);\ng.writeStartObject();",
     ["Jackson generator writes tokens."], "jackson"),
    ("JSONTokener t = new JSONTokener(s);\nJSONObject o = new JSONObject(t);",
     ["org.json exposes a tokener too."], "org.json"),
    ("Registration r = mapper.readValue(json, Registration.class);",
     ["Bind it with Jackson."], "jackson"),
    ("Iterator<String> it = names.iterator();\nwhile (it.hasNext()) { use(it.next()); }",
     ["Iterate with java.util."], "java.util"),
    ("StringWriter sw = new StringWriter();\nIOException last = null;",
     ["Capture output via java.io writers."], "java.io"),
]


def test_hand_linked_cases_agree_at_least_080(api_db):
    agree = 0
    for code, texts, expected in LINK_CASES:
        linked = link_snippet_to_api(parsed(code), texts, api_db)
        got = linked[0].name if linked else None
        if got == expected:
            agree += 1
    assert agree / len(LINK_CASES) >= 0.8, f"{agree}/{len(LINK_CASES)}"


# --- description generation --------------------------------------------------------

def sentences_of(texts):
    out = []
    for text in texts:
        out.extend(tokenize_sentences(text))
    return out


def test_fig2_description_includes_and_excludes(api_db):
    gson = api_db.get("Google Gson")
    picked = generate_description(sentences_of(FIG2_TEXTS), gson, 3, api_db=api_db)
    texts = [s.text for s in picked]
    assert any("supports generics and nested beans" in t for t in texts)
    assert not any("org.json" in t for t in texts)
    assert len(picked) <= 3


def test_single_qualifying_sentence_is_selected(api_db):
    gson = api_db.get("Google Gson")
    picked = generate_description(sentences_of(["Gson handles this."]), gson, 3,
                                  api_db=api_db)
    assert [s.text for s in picked] == ["Gson handles this."]


def test_no_qualifying_sentence_returns_empty(api_db):
    gson = api_db.get("Google Gson")
    assert generate_description(sentences_of(["Nothing relevant here."]), gson, 3,
                                api_db=api_db) == []


def test_selected_sentences_keep_document_order(api_db):
    jackson = api_db.get("jackson")
    texts = [
        "Jackson reads the tree first.",
        "Totally unrelated sentence.",
        "Then Jackson writes it back out.",
        "ObjectMapper is the entry point for Jackson.",
    ]
    picked = generate_description(sentences_of(texts), jackson, 3, api_db=api_db)
    positions = [texts.index(s.text) for s in picked]
    assert positions == sorted(positions)


SUMMARY_CASES = [
    {
        "api": "jackson",
        "sentences": [
            "Jackson's ObjectMapper binds JSON to your classes.",
            "My cat walked over the keyboard.",
            "Call readValue with the target class and Jackson does the rest.",
            "Remember to feed the cat.",
        ],
        "expected": [0, 2],
    },
    {
        "api": "Google Gson",
        "sentences": [
            "First add the dependency.",
            "Gson converts the string in one call.",
            "The same Gson instance is thread safe.",
            "Unrelated trivia about build tools.",
        ],
        "expected": [1, 2],
    },
    {
        "api": "org.json",
        "sentences": [
            "org.json ships a tiny JSONObject class.",
            "I prefer tabs over spaces.",
            "Wrap the payload in a JSONObject and read keys directly.",
        ],
        "expected": [0, 2],
    },
    {
        "api": "jackson",
        "sentences": [
            "Use the Jackson streaming API for huge documents.",
            "JsonParser walks the tokens without building a tree.",
            "This paragraph talks about lunch options.",
            "The generator mirrors the Jackson parser design.",
        ],
        "expected": [0, 1, 3],
    },
]


def test_hand_built_summaries_at_least_070(api_db):
    matched = total = 0
    for case in SUMMARY_CASES:
        api = api_db.get(case["api"])
        picked = generate_description(sentences_of(case["sentences"]), api, 3,
                                      api_db=api_db)
        picked_idx = {case["sentences"].index(s.text) for s in picked}
        expected = set(case["expected"])
        matched += len(picked_idx & expected)
        total += len(expected)
    assert matched / total >= 0.7, f"{matched}/{total}"


# --- review association --------------------------------------------------------------

def test_fig2_comments_attach_all_opinionated_sentences(corpus, api_db, scenarios):
    vignette = scenarios_for(scenarios, "Google Gson", thread="t1")[0]
    reviews = {o.sentence.text: o.polarity.value for o in vignette.reviews}
    # C1 is attached through the @author rule, C2 through the name mention.
    buggy = [t for t in reviews if "The code is buggy" in t]
    assert buggy and reviews[buggy[0]] == "negative"
    assert any("works great" in t for t in reviews)
    comment_ids = {o.sentence.comment_id for o in vignette.reviews}
    assert comment_ids == {"c111", "c112"}


def test_no_comments_yield_no_reviews(api_db):
    jackson = api_db.get("jackson")
    snippet = parsed("ObjectMapper m = new ObjectMapper();", post_id="p1")
    assert associate_reviews([], jackson, snippet, api_db=api_db) == []


def test_unrelated_comment_is_not_attached(api_db, corpus):
    class FakeComment:
        id = "c"
        text = "This thread is great but I am talking about something else entirely."
        created_at = corpus.threads[0].question.created_at

    jackson = api_db.get("jackson")
    snippet = parsed("ObjectMapper m = new ObjectMapper();", post_id="p1")
    assert associate_reviews([FakeComment()], jackson, snippet, api_db=api_db) == []


def test_review_provenance(scenarios, corpus):
    # Every review's comment belongs to the scenario's own post.
    comment_owner = {}
    for thread in corpus.threads:
        for post in thread.posts():
            for comment in post.comments:
                comment_owner[comment.id] = post.id
    for scenario in scenarios:
        for opinion in scenario.reviews:
            assert comment_owner[opinion.sentence.comment_id] == scenario.post_id


def test_neutral_sentences_never_become_reviews(scenarios):
    for scenario in scenarios:
        for opinion in scenario.reviews:
            assert opinion.polarity.value in ("positive", "negative")


# --- mining ----------------------------------------------------------------------------

def test_each_scenario_has_exactly_one_api(scenarios, api_db):
    for scenario in scenarios:
        assert api_db.get(scenario.api) is not None
        assert isinstance(scenario.api, str)


def test_mining_is_deterministic(corpus, api_db, config, mining_result):
    again = mine(corpus, api_db, config)
    assert [scenario_to_json(s) for s in again.scenarios] == \
        [scenario_to_json(s) for s in mining_result.scenarios]


def test_empty_corpus_mines_nothing(api_db, config):
    result = mine(Corpus(threads=()), api_db, config)
    assert result.scenarios == []


def test_scenario_counts_match_manifest(scenarios, corpus_manifest):
    by_api = {}
    for scenario in scenarios:
        by_api[scenario.api] = by_api.get(scenario.api, 0) + 1
    assert by_api == corpus_manifest["scenarios_by_api"]


def test_drop_reasons_are_aggregated(mining_result):
    drops = mining_result.report.drops
    assert drops["invalid-snippet:xml"] == 1
    assert drops["invalid-snippet:javascript"] == 1
    assert drops["invalid-snippet:stacktrace"] == 1
    assert drops["no-api-link"] == 1


def test_fallback_description_flagged(scenarios):
    fallback = [s for s in scenarios if s.description_fallback]
    assert [s.post_id for s in fallback] == ["a92"]
    assert len(fallback[0].description) == 1


def test_scenarios_roundtrip_through_json(scenarios, tmp_path):
    path = tmp_path / "scenarios.json"
    write_scenarios(scenarios, path)
    loaded = read_scenarios(path)
    assert [scenario_to_json(s) for s in loaded] == \
        [scenario_to_json(s) for s in scenarios]


def test_scenarios_match_golden_file(scenarios):
    golden = json.loads((FIXTURES / "golden_scenarios.json").read_text())
    assert [scenario_to_json(s) for s in scenarios] == golden

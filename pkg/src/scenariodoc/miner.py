"""Assemble usage scenarios: link snippets to APIs, generate task
descriptions and attach reviews from comments.

Every scenario is hard-linked to exactly one API. Mining is a pure
function of (corpus, api db, config): rerunning over the same inputs
yields the same scenario list.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .apidb import ApiDb, ApiRecord
from .config import Config
from .corpus import Corpus, Post, Thread, parse_timestamp
from .opinions import (Opinion, Polarity, Sentence, detect_polarity,
                       get_detector, tokenize_sentences)
from .snippets import (CodeSnippet, DataflowFacts, FlowFact, RawSnippet,
                       Validity, analyze_snippet, compute_dataflow,
                       extract_inline_mentions, extract_snippets, strip_html,
                       text_before_span)
from .textrank import beam_select, content_words, sentence_similarity, textrank_scores

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UsageScenario:
    id: str
    api: str
    snippet: CodeSnippet
    description: tuple[Sentence, ...]
    reviews: tuple[Opinion, ...]
    created_at: datetime
    thread_id: str
    post_id: str
    title: str
    api_types: frozenset[str] = frozenset()
    dataflow: DataflowFacts = field(default_factory=DataflowFacts)
    link_score: float = 0.0
    post_url: str = ""
    description_fallback: bool = False

    def positive_reviews(self) -> list[Opinion]:
        return [o for o in self.reviews if o.is_positive]

    def negative_reviews(self) -> list[Opinion]:
        return [o for o in self.reviews if o.is_negative]


@dataclass
class MiningReport:
    threads: int = 0
    posts_scanned: int = 0
    snippets_seen: int = 0
    snippets_valid: int = 0
    scenarios: int = 0
    drops: Counter = field(default_factory=Counter)

    def drop(self, reason: str) -> None:
        self.drops[reason] += 1


@dataclass
class MiningResult:
    scenarios: list[UsageScenario]
    report: MiningReport


# --- linking ------------------------------------------------------------------

def link_snippet_to_api(snippet: CodeSnippet, post_texts: list[str],
                        api_db: ApiDb, *,
                        type_weight: float = 0.7,
                        mention_weight: float = 0.3,
                        floor: float = 0.2) -> tuple[ApiRecord, float] | None:
    """Pick the single best API for a snippet, or None below the floor.

    Score per API: type_weight * (fraction of the snippet's non-local
    types provided by the API, with import corroboration) plus
    mention_weight when the API name is referenced in the surrounding
    text. Snippets whose only types are locally declared never link.
    """
    types = set(snippet.types_used)
    if not types:
        return None
    joined_text = "\n".join(t for t in post_texts if t)
    explicit = {imp for imp in snippet.imports if not imp.endswith(".*")}
    wildcards = tuple(imp[:-2] for imp in snippet.imports if imp.endswith(".*"))

    best: tuple[float, str, ApiRecord] | None = None
    for record in api_db:
        matched = 0
        for type_name in types:
            fqn = record.types.get(type_name)
            if fqn is None:
                continue
            package = fqn.rsplit(".", 1)[0]
            if explicit or wildcards:
                # Imports that contradict this API's packages veto the match.
                if fqn in explicit or package in wildcards:
                    matched += 1
                elif any(imp.rsplit(".", 1)[-1] == type_name for imp in explicit):
                    continue
                else:
                    matched += 1
            else:
                matched += 1
        type_fraction = matched / len(types)
        mention = 1.0 if joined_text and api_db.mentions(record, joined_text) else 0.0
        score = type_weight * type_fraction + mention_weight * mention
        if score <= floor:
            continue
        key = (score, record.name)
        if best is None or score > best[0] or (score == best[0] and record.name < best[1]):
            best = (score, record.name, record)
    if best is None:
        return None
    return best[2], best[0]


# --- description generation ----------------------------------------------------

def _references_api(text: str, api: ApiRecord, api_db: ApiDb) -> bool:
    if api_db.mentions(api, text):
        return True
    # Type names match case-sensitively: CamelCase identifiers are
    # distinctive, lowercased copies are just words.
    for type_name in api.types:
        if re.search(rf"\b{re.escape(type_name)}\b", text):
            return True
    return False


def generate_description(post_sentences: list[Sentence], api: ApiRecord,
                         max_sentences: int = 3, *,
                         api_db: ApiDb,
                         damping: float = 0.85,
                         iterations: int = 30,
                         beam_width: int = 5,
                         redundancy_penalty: float = 0.3) -> list[Sentence]:
    """Extract up to max_sentences sentences that refer to the linked API.

    Sentences are ranked by TextRank centrality over the whole post and
    chosen by beam search with a redundancy penalty; output keeps the
    original document order. Returns [] when nothing qualifies (the
    caller falls back to the sentence right before the snippet).
    """
    if not post_sentences:
        return []
    texts = [s.text for s in post_sentences]
    candidates = [i for i, s in enumerate(post_sentences)
                  if _references_api(s.text, api, api_db)]
    if not candidates:
        return []
    centrality = textrank_scores(texts, damping=damping, iterations=iterations)
    words = [content_words(t) for t in texts]

    def pair_sim(a: int, b: int) -> float:
        return sentence_similarity(words[a], words[b])

    chosen = beam_select(candidates, centrality, pair_sim, max_sentences,
                         beam_width=beam_width,
                         redundancy_penalty=redundancy_penalty)
    return [post_sentences[i] for i in sorted(chosen)]


# --- review association ---------------------------------------------------------

def _comment_references_api(comment_text: str, api: ApiRecord, api_db: ApiDb,
                            answer_author: str | None) -> bool:
    if _references_api(comment_text, api, api_db):
        return True
    if answer_author:
        return bool(re.search(rf"@{re.escape(answer_author)}\b", comment_text,
                              re.IGNORECASE))
    return False


def associate_reviews(comments, api: ApiRecord, snippet: CodeSnippet, *,
                      api_db: ApiDb,
                      detector=None,
                      neutral_band: float = 1.0,
                      answer_author: str | None = None) -> list[Opinion]:
    """Opinionated sentences from comments that reference the linked API.

    A comment references the API by name, by one of its type names, or
    by addressing the answer author (@author). All positive/negative
    sentences of a referencing comment are attached; neutral ones never.
    """
    reviews: list[Opinion] = []
    for comment in comments:
        if not _comment_references_api(comment.text, api, api_db, answer_author):
            continue
        sentences = tokenize_sentences(
            comment.text, source="comment", post_id=snippet.raw.post_id,
            comment_id=comment.id, created_at=comment.created_at)
        for sentence in sentences:
            opinion = detect_polarity(sentence, detector=detector,
                                      neutral_band=neutral_band)
            if opinion.polarity is not Polarity.NEUTRAL:
                reviews.append(opinion)
    return reviews


# --- scenario assembly -----------------------------------------------------------

def _post_sentences(post: Post) -> list[Sentence]:
    text = strip_html(post.body_html, drop_code=True)
    return tokenize_sentences(text, source="answer-body", post_id=post.id,
                              created_at=post.created_at)


def _mine_post(thread: Thread, post: Post, api_db: ApiDb, config: Config,
               detector, report: MiningReport) -> list[UsageScenario]:
    scenarios = []
    raws = extract_snippets(post)
    report.snippets_seen += len(raws)
    if not raws:
        return scenarios
    sentences = _post_sentences(post)
    mentions = extract_inline_mentions(post)
    post_texts = [thread.title] + [s.text for s in sentences] + mentions

    for index, raw in enumerate(raws):
        snippet = analyze_snippet(
            raw, min_lines=config.snippets.min_lines,
            validity_threshold=config.snippets.validity_threshold)
        if not snippet.validity.is_valid:
            report.drop(f"invalid-snippet:{snippet.validity.value}")
            continue
        report.snippets_valid += 1
        linked = link_snippet_to_api(
            snippet, post_texts, api_db,
            type_weight=config.linking.type_weight,
            mention_weight=config.linking.mention_weight,
            floor=config.linking.floor)
        if linked is None:
            report.drop("no-api-link")
            logger.debug("post %s snippet %d: no API link above floor", post.id, index)
            continue
        api, score = linked
        description = generate_description(
            sentences, api, config.description.max_sentences,
            api_db=api_db,
            damping=config.description.damping,
            iterations=config.description.iterations,
            beam_width=config.description.beam_width,
            redundancy_penalty=config.description.redundancy_penalty)
        fallback = False
        if not description:
            fallback = True
            before = text_before_span(post.body_html, raw.char_span)
            pieces = tokenize_sentences(before, source="answer-body",
                                        post_id=post.id, created_at=post.created_at)
            description = pieces[-1:]
        reviews = associate_reviews(
            post.comments, api, snippet, api_db=api_db, detector=detector,
            neutral_band=config.sentiment.neutral_band,
            answer_author=post.author)
        api_types = frozenset(t for t in snippet.types_used if t in api.types)
        scenarios.append(UsageScenario(
            id=f"{thread.id}:{post.id}:{index}",
            api=api.name,
            snippet=snippet,
            description=tuple(description),
            reviews=tuple(reviews),
            created_at=post.created_at,
            thread_id=thread.id,
            post_id=post.id,
            title=thread.title,
            api_types=api_types,
            dataflow=compute_dataflow(snippet),
            link_score=round(score, 4),
            post_url=config.corpus.post_url_template.format(
                post_id=post.id, thread_id=thread.id),
            description_fallback=fallback,
        ))
    return scenarios


def mine(corpus: Corpus, api_db: ApiDb, config: Config | None = None) -> MiningResult:
    """Mine every thread; aggregates per-stage drop reasons in the report."""
    config = config or Config()
    detector = get_detector(config.sentiment.detector,
                            negation_window=config.sentiment.negation_window)
    report = MiningReport(threads=len(corpus))
    scenarios: list[UsageScenario] = []
    for thread in corpus.threads:
        posts = list(thread.answers)
        if config.corpus.include_questions:
            posts = [thread.question] + posts
        for post in posts:
            report.posts_scanned += 1
            scenarios.extend(_mine_post(thread, post, api_db, config,
                                        detector, report))
    # Corpus order is already deterministic; keep discovery order.
    report.scenarios = len(scenarios)
    return MiningResult(scenarios=scenarios, report=report)


def mine_scenarios(corpus: Corpus, api_db: ApiDb,
                   config: Config | None = None) -> list[UsageScenario]:
    return mine(corpus, api_db, config).scenarios


def scenarios_by_api(scenarios: list[UsageScenario]) -> dict[str, list[UsageScenario]]:
    grouped: dict[str, list[UsageScenario]] = {}
    for scenario in scenarios:
        grouped.setdefault(scenario.api, []).append(scenario)
    return grouped


# --- JSON codec (the scenarios.json pipeline seam) --------------------------------

def _sentence_to_json(sentence: Sentence) -> dict:
    return {
        "text": sentence.text,
        "source": sentence.source,
        "post_id": sentence.post_id,
        "comment_id": sentence.comment_id,
        "created_at": sentence.created_at.isoformat() if sentence.created_at else None,
    }


def _sentence_from_json(data: dict) -> Sentence:
    return Sentence(
        text=data["text"],
        source=data.get("source", "answer-body"),
        post_id=data.get("post_id", ""),
        comment_id=data.get("comment_id"),
        created_at=parse_timestamp(data.get("created_at")),
    )


def _flow_fact_to_json(fact: FlowFact) -> dict:
    return {
        "type": fact.type_name,
        "method": fact.method,
        "receiver_type": fact.receiver_type,
        "produced_by": fact.produced_by,
        "produced_receiver": fact.produced_receiver,
    }


def _flow_fact_from_json(data: dict) -> FlowFact:
    return FlowFact(
        type_name=data.get("type"),
        method=data["method"],
        receiver_type=data.get("receiver_type"),
        produced_by=data.get("produced_by"),
        produced_receiver=data.get("produced_receiver"),
    )


def _fact_key(data: dict):
    return tuple((k, v if v is not None else "") for k, v in sorted(data.items()))


def scenario_to_json(scenario: UsageScenario) -> dict:
    snippet = scenario.snippet
    return {
        "id": scenario.id,
        "api": scenario.api,
        "thread_id": scenario.thread_id,
        "post_id": scenario.post_id,
        "title": scenario.title,
        "created_at": scenario.created_at.isoformat(),
        "post_url": scenario.post_url,
        "link_score": scenario.link_score,
        "api_types": sorted(scenario.api_types),
        "code": snippet.text,
        "snippet": {
            "validity": snippet.validity.value,
            "line_count": snippet.line_count,
            "types_used": sorted(snippet.types_used),
            "local_decls": sorted(snippet.local_decls),
            "imports": list(snippet.imports),
            "methods_called": [[recv, name] for recv, name in snippet.methods_called],
            "heuristic": snippet.heuristic,
        },
        "description": [_sentence_to_json(s) for s in scenario.description],
        "description_fallback": scenario.description_fallback,
        "reviews": [
            {
                "sentence": _sentence_to_json(o.sentence),
                "polarity": o.polarity.value,
                "score": o.score,
            }
            for o in scenario.reviews
        ],
        "dataflow": {
            "inputs": sorted((_flow_fact_to_json(f) for f in scenario.dataflow.inputs),
                             key=_fact_key),
            "outputs": sorted((_flow_fact_to_json(f) for f in scenario.dataflow.outputs),
                              key=_fact_key),
            "internal_edges": sorted(
                (list(edge) for edge in scenario.dataflow.internal_edges),
                key=lambda e: (e[0] or "", e[1], e[2])),
        },
    }


def scenario_from_json(data: dict) -> UsageScenario:
    snippet_info = data["snippet"]
    raw = RawSnippet(post_id=data["post_id"], text=data["code"], char_span=(0, 0))
    snippet = CodeSnippet(
        raw=raw,
        validity=Validity(snippet_info["validity"]),
        types_used=frozenset(snippet_info["types_used"]),
        methods_called=tuple((recv, name) for recv, name in snippet_info["methods_called"]),
        imports=tuple(snippet_info["imports"]),
        local_decls=frozenset(snippet_info["local_decls"]),
        line_count=snippet_info["line_count"],
        heuristic=snippet_info.get("heuristic", False),
    )
    flow = data.get("dataflow", {})
    dataflow = DataflowFacts(
        inputs=frozenset(_flow_fact_from_json(f) for f in flow.get("inputs", [])),
        outputs=frozenset(_flow_fact_from_json(f) for f in flow.get("outputs", [])),
        internal_edges=frozenset(
            (edge[0], edge[1], edge[2]) for edge in flow.get("internal_edges", [])),
    )
    reviews = tuple(
        Opinion(sentence=_sentence_from_json(r["sentence"]),
                polarity=Polarity(r["polarity"]),
                score=r["score"])
        for r in data.get("reviews", ()))
    return UsageScenario(
        id=data["id"],
        api=data["api"],
        snippet=snippet,
        description=tuple(_sentence_from_json(s) for s in data.get("description", ())),
        reviews=reviews,
        created_at=parse_timestamp(data["created_at"]),
        thread_id=data["thread_id"],
        post_id=data["post_id"],
        title=data.get("title", ""),
        api_types=frozenset(data.get("api_types", ())),
        dataflow=dataflow,
        link_score=data.get("link_score", 0.0),
        post_url=data.get("post_url", ""),
        description_fallback=data.get("description_fallback", False),
    )


def write_scenarios(scenarios: list[UsageScenario], path: str | Path) -> None:
    payload = [scenario_to_json(s) for s in scenarios]
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def read_scenarios(path: str | Path) -> list[UsageScenario]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return [scenario_from_json(entry) for entry in payload]

"""Extractive sentence ranking: TextRank centrality plus beam selection."""

from __future__ import annotations

import math
import re

_WORD_RE = re.compile(r"[a-z0-9']+")
_STOPWORDS = frozenset("""
a an the and or but if then else of in on at to from by for with as is are
was were be been being this that these those it its you your i we they he
she them his her my our us do does did done can could will would should may
might must have has had not no nor so than too very just also there here
what which who whom when where why how all any both each few more most other
some such only own same about into over under again once
""".split())


def content_words(text: str) -> list[str]:
    return [w for w in _WORD_RE.findall(text.lower()) if w not in _STOPWORDS]


def sentence_similarity(words_a: list[str], words_b: list[str]) -> float:
    """Normalized word overlap; zero for degenerate sentences."""
    if not words_a or not words_b:
        return 0.0
    overlap = len(set(words_a) & set(words_b))
    if not overlap:
        return 0.0
    denom = math.log(max(len(words_a), 2)) + math.log(max(len(words_b), 2))
    return overlap / denom


def textrank_scores(texts: list[str], damping: float = 0.85,
                    iterations: int = 30) -> list[float]:
    """Centrality of each sentence in the weighted similarity graph."""
    n = len(texts)
    if n == 0:
        return []
    if n == 1:
        return [1.0]
    words = [content_words(t) for t in texts]
    weights = [[0.0] * n for _ in range(n)]
    degree = [0.0] * n
    for i in range(n):
        for j in range(i + 1, n):
            w = sentence_similarity(words[i], words[j])
            weights[i][j] = weights[j][i] = w
            degree[i] += w
            degree[j] += w
    scores = [1.0 / n] * n
    base = (1.0 - damping) / n
    for _ in range(iterations):
        nxt = []
        for i in range(n):
            incoming = sum(
                weights[j][i] / degree[j] * scores[j]
                for j in range(n) if weights[j][i] > 0 and degree[j] > 0)
            nxt.append(base + damping * incoming)
        scores = nxt
    return scores


def beam_select(candidates: list[int], centrality: list[float],
                pair_sim, max_count: int, beam_width: int = 5,
                redundancy_penalty: float = 0.3) -> list[int]:
    """Pick up to max_count candidate indices maximizing summed
    centrality minus a redundancy penalty over pairwise similarity.

    Deterministic: beams are ranked by (score desc, index tuple asc).
    """
    if max_count <= 0 or not candidates:
        return []

    def objective(subset: tuple[int, ...]) -> float:
        total = sum(centrality[i] for i in subset)
        for a in range(len(subset)):
            for b in range(a + 1, len(subset)):
                total -= redundancy_penalty * pair_sim(subset[a], subset[b])
        return total

    best: tuple[float, tuple[int, ...]] = (0.0, ())
    beam: list[tuple[float, tuple[int, ...]]] = [(0.0, ())]
    for _ in range(max_count):
        grown: dict[tuple[int, ...], float] = {}
        for _, subset in beam:
            last = subset[-1] if subset else -1
            for idx in candidates:
                if idx <= last:
                    continue
                extended = subset + (idx,)
                grown.setdefault(extended, objective(extended))
        if not grown:
            break
        ranked = sorted(grown.items(), key=lambda kv: (-kv[1], kv[0]))
        beam = [(score, subset) for subset, score in ranked[:beam_width]]
        if beam and beam[0][0] > best[0]:
            best = beam[0]
    return list(best[1])

"""Sentence tokenization and pluggable polarity detection.

The default detector scores sentences against a small lexicon tuned for
software-engineering text, with a negation window and an exclamation
boost. Any object with a ``score(text) -> float`` method can replace it
via the ``sentiment.detector`` config key; swapping detectors changes
opinion values but never the pipeline's structural outputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from importlib import resources


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class Sentence:
    text: str
    source: str = "answer-body"  # answer-body | comment
    post_id: str = ""
    comment_id: str | None = None
    created_at: datetime | None = None


@dataclass(frozen=True)
class Opinion:
    sentence: Sentence
    polarity: Polarity
    score: float

    @property
    def is_positive(self) -> bool:
        return self.polarity is Polarity.POSITIVE

    @property
    def is_negative(self) -> bool:
        return self.polarity is Polarity.NEGATIVE


# --- sentence tokenization ---------------------------------------------------

_ABBREVIATIONS = {
    "e.g", "i.e", "etc", "cf", "vs", "al", "mr", "mrs", "dr", "prof",
    "fig", "sec", "no", "approx", "min", "max", "resp",
}
_BOUNDARY_RE = re.compile(r"(?<=[.!?])[\"')\]]*\s+(?=[\"'(\[]?[A-Z0-9])")


def _is_abbreviation(prefix: str) -> bool:
    tail = prefix.rstrip(".!?")
    last = re.split(r"[\s(]", tail)[-1].lower().lstrip(".")
    if last in _ABBREVIATIONS:
        return True
    # Single capital letter before the period reads as an initial.
    return bool(re.match(r"^[A-Z]$", re.split(r"\s", tail)[-1] or ""))


def split_sentence_texts(text: str) -> list[str]:
    """Split plain text into sentence strings, preserving all content."""
    pieces: list[str] = []
    for paragraph in re.split(r"\n+", text):
        paragraph = paragraph.strip()
        if not paragraph:
            continue
        start = 0
        for match in _BOUNDARY_RE.finditer(paragraph):
            candidate = paragraph[start:match.start()].rstrip()
            if _is_abbreviation(candidate):
                continue
            piece = paragraph[start:match.end()].strip()
            if piece:
                pieces.append(piece)
            start = match.end()
        tail = paragraph[start:].strip()
        if tail:
            pieces.append(tail)
    return pieces


def tokenize_sentences(text: str, *,
                       source: str = "answer-body",
                       post_id: str = "",
                       comment_id: str | None = None,
                       created_at: datetime | None = None) -> list[Sentence]:
    """Sentences of already code-stripped plain text, in stable order."""
    return [
        Sentence(text=piece, source=source, post_id=post_id,
                 comment_id=comment_id, created_at=created_at)
        for piece in split_sentence_texts(text)
    ]


# --- polarity detection -------------------------------------------------------

_NEGATIONS = {
    "not", "no", "never", "none", "cannot", "cant", "can't", "dont", "don't",
    "doesnt", "doesn't", "didnt", "didn't", "wont", "won't", "isnt", "isn't",
    "aint", "arent", "aren't", "wasnt", "wasn't", "werent", "weren't",
    "without", "hardly", "barely", "neither", "nor", "nothing",
}
_TOKEN_RE = re.compile(r"[a-z']+")


def _load_lexicon(filename: str) -> frozenset[str]:
    raw = resources.files("scenariodoc.data").joinpath(filename).read_text("utf-8")
    return frozenset(
        word.strip().lower() for word in raw.splitlines()
        if word.strip() and not word.startswith("#"))


class LexiconSentimentDetector:
    """Word-list scorer with negation flips and an exclamation boost."""

    name = "lexicon"

    def __init__(self, positive: frozenset[str] | None = None,
                 negative: frozenset[str] | None = None,
                 negation_window: int = 3):
        self.positive = positive or _load_lexicon("lexicon_positive.txt")
        self.negative = negative or _load_lexicon("lexicon_negative.txt")
        self.negation_window = negation_window

    def score(self, text: str) -> float:
        tokens = _TOKEN_RE.findall(text.lower())
        total = 0.0
        for i, token in enumerate(tokens):
            hit = 0.0
            if token in self.positive:
                hit = 1.0
            elif token in self.negative:
                hit = -1.0
            if not hit:
                continue
            window = tokens[max(0, i - self.negation_window):i]
            if any(w in _NEGATIONS for w in window):
                hit = -hit
            total += hit
        if total and "!" in text:
            total += 1.0 if total > 0 else -1.0
        return total


_DETECTOR_FACTORIES = {
    "lexicon": LexiconSentimentDetector,
}
_default_detector: LexiconSentimentDetector | None = None


def register_detector(name: str, factory) -> None:
    """Make a detector constructable through the config key."""
    _DETECTOR_FACTORIES[name] = factory


def get_detector(name: str = "lexicon", **kwargs):
    try:
        factory = _DETECTOR_FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown sentiment detector: {name}") from None
    try:
        return factory(**kwargs)
    except TypeError:
        # Third-party detectors need not accept the lexicon's options.
        return factory()


def detect_polarity(sentence: Sentence | str, detector=None,
                    neutral_band: float = 1.0) -> Opinion:
    """Score one sentence; |score| below neutral_band reads as neutral."""
    global _default_detector
    if isinstance(sentence, str):
        sentence = Sentence(text=sentence)
    if detector is None:
        if _default_detector is None:
            _default_detector = LexiconSentimentDetector()
        detector = _default_detector
    score = detector.score(sentence.text.strip())
    if abs(score) < neutral_band:
        polarity = Polarity.NEUTRAL
    elif score > 0:
        polarity = Polarity.POSITIVE
    else:
        polarity = Polarity.NEGATIVE
    return Opinion(sentence=sentence, polarity=polarity, score=score)

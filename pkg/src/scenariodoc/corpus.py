"""Ingest Q&A thread dumps into a normalized, immutable corpus model.

Two input formats are supported: a JSON-lines file with one thread per
line (canonical, schema documented in the README) and a best-effort
Stack-Exchange-style XML dump (``Posts.xml`` plus optional
``Comments.xml``, or a directory containing them).
"""

from __future__ import annotations

import json
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

logger = logging.getLogger(__name__)


class CorpusLoadError(Exception):
    """Raised when the corpus file cannot be read at all."""


@dataclass(frozen=True)
class Comment:
    id: str
    text: str
    created_at: datetime
    author: str = ""


@dataclass(frozen=True)
class Post:
    id: str
    body_html: str
    created_at: datetime
    score: int = 0
    comments: tuple[Comment, ...] = ()
    # Optional display name of the post author; used to recognize
    # @author-addressed comments when associating reviews.
    author: str | None = None


@dataclass(frozen=True)
class Thread:
    id: str
    title: str
    question: Post
    answers: tuple[Post, ...] = ()
    tags: tuple[str, ...] = ()

    def posts(self) -> tuple[Post, ...]:
        return (self.question, *self.answers)


@dataclass(frozen=True)
class Corpus:
    threads: tuple[Thread, ...]
    skipped_records: int = 0

    def __len__(self) -> int:
        return len(self.threads)

    def thread_of_post(self, post_id: str) -> Thread | None:
        for thread in self.threads:
            for post in thread.posts():
                if post.id == post_id:
                    return thread
        return None


@dataclass(frozen=True)
class CorpusStats:
    threads: int
    posts: int
    sentences: int
    snippets: int
    users: int

    @property
    def avg_posts(self) -> float:
        return self.posts / self.threads if self.threads else 0.0

    @property
    def avg_sentences(self) -> float:
        return self.sentences / self.threads if self.threads else 0.0

    @property
    def avg_snippets(self) -> float:
        return self.snippets / self.threads if self.threads else 0.0


def parse_timestamp(value) -> datetime | None:
    """Parse an ISO-8601 timestamp to an aware UTC datetime, or None."""
    if value is None or value == "":
        return None
    if isinstance(value, datetime):
        dt = value
    else:
        text = str(value).strip()
        if text.endswith("Z"):
            text = text[:-1] + "+00:00"
        try:
            dt = datetime.fromisoformat(text)
        except ValueError:
            return None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def _comment_from_dict(data: dict, post_id: str) -> Comment | None:
    created = parse_timestamp(data.get("created_at"))
    text = (data.get("text") or "").strip()
    if created is None or not text:
        logger.warning("skipping comment %s on post %s: missing text or timestamp",
                       data.get("id"), post_id)
        return None
    return Comment(
        id=str(data.get("id", "")),
        text=text,
        created_at=created,
        author=str(data.get("author", "") or ""),
    )


def _post_from_dict(data: dict, *, kind: str, thread_id: str) -> Post | None:
    body = data.get("body_html") or ""
    created = parse_timestamp(data.get("created_at"))
    if not body or created is None:
        logger.warning("skipping %s %s in thread %s: missing body or timestamp",
                       kind, data.get("id"), thread_id)
        return None
    post_id = str(data.get("id", ""))
    comments = []
    for raw in data.get("comments", ()):
        if not isinstance(raw, dict):
            logger.warning("skipping malformed comment on post %s", post_id)
            continue
        comment = _comment_from_dict(raw, post_id)
        if comment is not None:
            comments.append(comment)
    author = data.get("author")
    return Post(
        id=post_id,
        body_html=body,
        created_at=created,
        score=int(data.get("score", 0)),
        comments=tuple(comments),
        author=str(author) if author else None,
    )


def _thread_from_dict(data: dict) -> Thread | None:
    thread_id = str(data.get("id", ""))
    if not thread_id or "question" not in data:
        logger.warning("skipping thread record without id/question")
        return None
    question = _post_from_dict(data["question"], kind="question", thread_id=thread_id)
    if question is None:
        return None
    answers = []
    for raw in data.get("answers", ()):
        if not isinstance(raw, dict):
            logger.warning("skipping malformed answer in thread %s", thread_id)
            continue
        answer = _post_from_dict(raw, kind="answer", thread_id=thread_id)
        if answer is not None:
            answers.append(answer)
    return Thread(
        id=thread_id,
        title=str(data.get("title", "")),
        question=question,
        answers=tuple(answers),
        tags=tuple(str(t) for t in data.get("tags", ())),
    )


def _load_jsonl(path: Path) -> Corpus:
    threads: list[Thread] = []
    seen_ids: set[str] = set()
    skipped = 0
    try:
        handle = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise CorpusLoadError(f"cannot read corpus file {path}: {exc}") from exc
    with handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError:
                logger.warning("skipping malformed JSON on line %d of %s", lineno, path)
                skipped += 1
                continue
            thread = _thread_from_dict(data)
            if thread is None:
                skipped += 1
                continue
            if thread.id in seen_ids:
                logger.warning("skipping duplicate thread id %s on line %d", thread.id, lineno)
                skipped += 1
                continue
            seen_ids.add(thread.id)
            threads.append(thread)
    return Corpus(threads=tuple(threads), skipped_records=skipped)


_TAG_RE = re.compile(r"<([^<>|]+)>")


def _parse_se_tags(raw: str) -> tuple[str, ...]:
    raw = raw or ""
    found = _TAG_RE.findall(raw)
    if found:
        return tuple(found)
    return tuple(t for t in raw.split("|") if t)


def _iter_xml_rows(path: Path):
    try:
        for _, elem in ET.iterparse(str(path), events=("end",)):
            if elem.tag == "row":
                yield dict(elem.attrib)
                elem.clear()
    except ET.ParseError as exc:
        logger.warning("XML parse stopped early in %s: %s", path, exc)


def _load_xml(path: Path) -> Corpus:
    path = Path(path)
    if path.is_dir():
        posts_file = path / "Posts.xml"
        comments_file = path / "Comments.xml"
    else:
        posts_file = path
        comments_file = path.with_name("Comments.xml")
    if not posts_file.exists():
        raise CorpusLoadError(f"no Posts.xml found at {path}")

    comments_by_post: dict[str, list[Comment]] = {}
    if comments_file.exists():
        for row in _iter_xml_rows(comments_file):
            created = parse_timestamp(row.get("CreationDate"))
            text = (row.get("Text") or "").strip()
            if created is None or not text:
                continue
            comment = Comment(
                id=row.get("Id", ""),
                text=text,
                created_at=created,
                author=row.get("UserDisplayName") or row.get("UserId", ""),
            )
            comments_by_post.setdefault(row.get("PostId", ""), []).append(comment)

    questions: dict[str, dict] = {}
    answers_by_parent: dict[str, list[Post]] = {}
    skipped = 0
    for row in _iter_xml_rows(posts_file):
        created = parse_timestamp(row.get("CreationDate"))
        body = row.get("Body") or ""
        post_id = row.get("Id", "")
        if created is None or not body:
            logger.warning("skipping post %s: missing body or timestamp", post_id)
            skipped += 1
            continue
        post = Post(
            id=post_id,
            body_html=body,
            created_at=created,
            score=int(row.get("Score", 0) or 0),
            comments=tuple(comments_by_post.get(post_id, ())),
            author=row.get("OwnerDisplayName") or row.get("OwnerUserId") or None,
        )
        kind = row.get("PostTypeId")
        if kind == "1":
            questions[post_id] = {
                "post": post,
                "title": row.get("Title", ""),
                "tags": _parse_se_tags(row.get("Tags", "")),
            }
        elif kind == "2":
            answers_by_parent.setdefault(row.get("ParentId", ""), []).append(post)
        else:
            skipped += 1

    threads = []
    for qid, info in questions.items():
        threads.append(Thread(
            id=qid,
            title=info["title"],
            question=info["post"],
            answers=tuple(answers_by_parent.get(qid, ())),
            tags=info["tags"],
        ))
    orphans = sum(len(v) for k, v in answers_by_parent.items() if k not in questions)
    if orphans:
        logger.warning("dropping %d answers without a question post", orphans)
        skipped += orphans
    return Corpus(threads=tuple(threads), skipped_records=skipped)


def load_corpus(path: str | Path, format: str = "json-lines") -> Corpus:
    """Load a thread dump into a Corpus.

    Malformed records are skipped with a warning; an unreadable file or
    unknown format raises CorpusLoadError.
    """
    path = Path(path)
    if format == "json-lines":
        corpus = _load_jsonl(path)
    elif format == "xml-dump":
        corpus = _load_xml(path)
    else:
        raise CorpusLoadError(f"unknown corpus format: {format}")
    posts = sum(len(t.posts()) for t in corpus.threads)
    comments = sum(len(p.comments) for t in corpus.threads for p in t.posts())
    logger.info("loaded %d threads, %d posts, %d comments (%d records skipped)",
                len(corpus), posts, comments, corpus.skipped_records)
    return corpus


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Descriptive statistics; "posts" counts questions, answers and comments."""
    # Local imports: snippets/opinions depend on corpus types.
    from .opinions import tokenize_sentences
    from .snippets import extract_snippets, strip_html

    posts = 0
    sentences = 0
    snippets = 0
    users: set[str] = set()
    for thread in corpus.threads:
        for post in thread.posts():
            posts += 1
            if post.author:
                users.add(post.author)
            sentences += len(tokenize_sentences(strip_html(post.body_html, drop_code=True)))
            snippets += len(extract_snippets(post))
            for comment in post.comments:
                posts += 1
                if comment.author:
                    users.add(comment.author)
                sentences += len(tokenize_sentences(comment.text))
    return CorpusStats(
        threads=len(corpus),
        posts=posts,
        sentences=sentences,
        snippets=snippets,
        users=len(users),
    )

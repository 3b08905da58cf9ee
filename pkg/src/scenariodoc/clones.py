"""Near-miss clone similarity over normalized snippet lines.

Lines are normalized (comments and blank lines dropped, whitespace
collapsed, string/number/char literals renamed to <LIT>), then compared
with line-level edit distance. Snippets under the minimum block size
are never clones; the similarity floor for a clone pair is 0.6.
"""

from __future__ import annotations

import re

from .snippets import CodeSnippet, strip_comments

_STRING_RE = re.compile(r'"(?:\\.|[^"\\])*"' + r"|'(?:\\.|[^'\\])*'")
_NUMBER_RE = re.compile(r"\b\d+(?:\.\d+)?[fFdDlL]?\b|\b0x[0-9a-fA-F]+\b")

DEFAULT_CLONE_THRESHOLD = 0.6
DEFAULT_MIN_LINES = 5


def normalize_lines(code: str) -> list[str]:
    """Comment-free, literal-renamed, whitespace-collapsed lines."""
    text = strip_comments(code)
    text = _STRING_RE.sub("<LIT>", text)
    text = _NUMBER_RE.sub("<LIT>", text)
    lines = []
    for line in text.splitlines():
        line = re.sub(r"\s+", " ", line).strip()
        if line:
            lines.append(line)
    return lines


def _line_edit_distance(a: list[str], b: list[str]) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, line_a in enumerate(a, start=1):
        current = [i]
        for j, line_b in enumerate(b, start=1):
            cost = 0 if line_a == line_b else 1
            current.append(min(previous[j] + 1,
                               current[j - 1] + 1,
                               previous[j - 1] + cost))
        previous = current
    return previous[-1]


def _code_of(snippet) -> str:
    if isinstance(snippet, CodeSnippet):
        return snippet.text
    return str(snippet)


def clone_similarity(snippet_a, snippet_b, *,
                     min_lines: int = DEFAULT_MIN_LINES) -> float:
    """Similarity in [0, 1]; 0.0 whenever either side is under the size floor."""
    lines_a = normalize_lines(_code_of(snippet_a))
    lines_b = normalize_lines(_code_of(snippet_b))
    if len(lines_a) < min_lines or len(lines_b) < min_lines:
        return 0.0
    distance = _line_edit_distance(lines_a, lines_b)
    return 1.0 - distance / max(len(lines_a), len(lines_b))


def are_clones(snippet_a, snippet_b, *,
               threshold: float = DEFAULT_CLONE_THRESHOLD,
               min_lines: int = DEFAULT_MIN_LINES) -> bool:
    return clone_similarity(snippet_a, snippet_b, min_lines=min_lines) >= threshold


def clone_groups(items: list, code_of=None, *,
                 threshold: float = DEFAULT_CLONE_THRESHOLD,
                 min_lines: int = DEFAULT_MIN_LINES) -> list[list]:
    """Single-link grouping under the clone relation, order-preserving.

    ``code_of`` maps an item to its code text; items default to being
    snippets themselves. Under-floor items end up in singleton groups.
    """
    code_of = code_of or _code_of
    n = len(items)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    normalized = [normalize_lines(code_of(item)) for item in items]
    for i in range(n):
        if len(normalized[i]) < min_lines:
            continue
        for j in range(i + 1, n):
            if len(normalized[j]) < min_lines:
                continue
            distance = _line_edit_distance(normalized[i], normalized[j])
            similarity = 1.0 - distance / max(len(normalized[i]), len(normalized[j]))
            if similarity >= threshold:
                root_i, root_j = find(i), find(j)
                if root_i != root_j:
                    parent[max(root_i, root_j)] = min(root_i, root_j)

    groups: dict[int, list] = {}
    for i, item in enumerate(items):
        groups.setdefault(find(i), []).append(item)
    return [groups[root] for root in sorted(groups)]

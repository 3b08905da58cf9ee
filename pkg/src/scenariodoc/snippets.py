"""Code block extraction, validity classification and lightweight parsing.

Snippets from forum posts are fragments, not compilation units, so the
parser here is deliberately tolerant: regex passes over comment-stripped
text collect type usages, method calls and declared locals without
requiring an enclosing class. Dataflow is intra-snippet and type-level
only; there is no alias analysis.
"""

from __future__ import annotations

import html
import logging
import re
from dataclasses import dataclass, field
from enum import Enum

logger = logging.getLogger(__name__)


class Validity(str, Enum):
    VALID_JAVA = "valid-java"
    XML = "xml"
    JSON = "json"
    JAVASCRIPT = "javascript"
    STACKTRACE = "stacktrace"
    PROSE = "prose"
    TOO_SHORT = "too-short"

    @property
    def is_valid(self) -> bool:
        return self is Validity.VALID_JAVA


@dataclass(frozen=True)
class RawSnippet:
    post_id: str
    text: str
    char_span: tuple[int, int]
    block: bool = True  # wrapped in <pre>, as opposed to inline

    def line_count(self) -> int:
        return max(1, sum(1 for line in self.text.splitlines() if line.strip()))


@dataclass(frozen=True)
class FlowFact:
    """One endpoint of a type-level dataflow fact.

    For outputs, ``method`` produced the value on ``receiver_type``.
    For inputs, ``method`` consumed it; ``produced_by`` (and its
    ``produced_receiver``) name the in-snippet producer when there is
    one. ``type_name`` is None when the static type is unknown.
    """
    type_name: str | None
    method: str
    receiver_type: str | None = None
    produced_by: str | None = None
    produced_receiver: str | None = None


@dataclass(frozen=True)
class DataflowFacts:
    inputs: frozenset[FlowFact] = frozenset()
    outputs: frozenset[FlowFact] = frozenset()
    internal_edges: frozenset[tuple[str | None, str, str]] = frozenset()

    def output_types(self) -> frozenset[str]:
        return frozenset(f.type_name for f in self.outputs if f.type_name)

    def input_types(self) -> frozenset[str]:
        return frozenset(f.type_name for f in self.inputs if f.type_name)


@dataclass(frozen=True)
class CodeSnippet:
    raw: RawSnippet
    validity: Validity
    types_used: frozenset[str] = frozenset()
    methods_called: tuple[tuple[str | None, str], ...] = ()
    imports: tuple[str, ...] = ()
    local_decls: frozenset[str] = frozenset()
    line_count: int = 1
    heuristic: bool = False
    var_types: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def text(self) -> str:
        return self.raw.text


# --- extraction -------------------------------------------------------------

_CODE_BLOCK_RE = re.compile(r"<code[^>]*>(.*?)</code>", re.IGNORECASE | re.DOTALL)
_PRE_BEFORE_RE = re.compile(r"<pre[^>]*>\s*$", re.IGNORECASE)
_TAG_RE = re.compile(r"<[^>]+>")
_BLOCK_TAG_RE = re.compile(r"</?(?:p|div|br|li|ul|ol|h[1-6]|blockquote|pre|tr|table)[^>]*>",
                           re.IGNORECASE)


def _code_text(markup: str) -> str:
    return html.unescape(_TAG_RE.sub("", markup))


def _looks_inline(text: str) -> bool:
    stripped = text.strip()
    return "\n" not in stripped and len(stripped.split()) <= 1


def extract_snippets(post) -> list[RawSnippet]:
    """All code blocks of a post, in document order.

    Inline single-token ``<code>`` spans are mentions, not snippets; use
    extract_inline_mentions for those.
    """
    body = post.body_html
    snippets = []
    for match in _CODE_BLOCK_RE.finditer(body):
        text = _code_text(match.group(1))
        if not text.strip():
            continue
        if _looks_inline(text):
            continue
        block = bool(_PRE_BEFORE_RE.search(body, 0, match.start()))
        snippets.append(RawSnippet(
            post_id=post.id,
            text=text,
            char_span=(match.start(), match.end()),
            block=block,
        ))
    opened = len(re.findall(r"<code\b", body, re.IGNORECASE))
    if opened > len(re.findall(r"</code>", body, re.IGNORECASE)):
        logger.warning("post %s: unbalanced <code> tags, extraction is best-effort", post.id)
    return snippets


def extract_inline_mentions(post) -> list[str]:
    """Single-token <code> spans; these feed API mention linking."""
    mentions = []
    for match in _CODE_BLOCK_RE.finditer(post.body_html):
        text = _code_text(match.group(1)).strip()
        if text and _looks_inline(text):
            mentions.append(text)
    return mentions


def _inline_or_blank(match: re.Match) -> str:
    text = _code_text(match.group(1))
    return text if _looks_inline(text) else " "


def strip_html(body: str, drop_code: bool = True) -> str:
    """Plain text of an HTML body.

    With drop_code, code blocks are removed but inline single-token
    spans keep their text: they read as part of the sentence.
    """
    if drop_code:
        body = _CODE_BLOCK_RE.sub(_inline_or_blank, body)
    body = _BLOCK_TAG_RE.sub("\n", body)
    body = _TAG_RE.sub(" ", body)
    text = html.unescape(body)
    lines = [re.sub(r"[ \t]+", " ", line).strip() for line in text.split("\n")]
    return "\n".join(line for line in lines if line)


def text_before_span(body: str, char_span: tuple[int, int]) -> str:
    """Non-code text preceding a snippet; used for the description fallback."""
    return strip_html(body[:char_span[0]], drop_code=True)


# --- validity classification ------------------------------------------------

_JAVA_KEYWORDS_RE = re.compile(
    r"\b(?:class|interface|enum|import|package|public|private|protected|static|"
    r"final|void|new|return|extends|implements|throws|try|catch|finally|"
    r"instanceof|synchronized|int|long|double|float|boolean|char|byte|short)\b")
_CALL_PATTERN_RE = re.compile(r"\b\w+\s*\.\s*[a-z]\w*\s*\(")
_TYPE_DECL_HINT_RE = re.compile(
    r"\b[A-Z][\w$]*(?:<[^<>]{0,80}>)?(?:\[\])*\s+[a-z_$][\w$]*\s*[=;,)]")
_XML_TAG_RE = re.compile(r"<\??/?[a-zA-Z][\w:.-]*(?:\s[^<>]*)?/?>")
_GENERIC_TAG_RE = re.compile(r"<[A-Z][\w$]*(?:\s*,\s*[A-Z][\w$]*)*>")
_STACK_FRAME_RE = re.compile(r"^\s*at\s+[\w.$<>/]+\(.*\)\s*$", re.MULTILINE)
_EXCEPTION_HEAD_RE = re.compile(
    r"^\s*(?:Exception in thread|Caused by:|[\w.]+(?:Exception|Error):)", re.MULTILINE)
_JSON_KEY_RE = re.compile(r"[\{,]\s*\"[^\"]+\"\s*:")
_JS_MARKERS_RE = re.compile(
    r"function\s*\(|=>|\bvar\s+\w+\s*=|\blet\s+\w+\s*=|\bconst\s+\w+\s*=|"
    r"\$\(|console\.log|===|document\.|require\(")
_STRING_LIT_RE = re.compile(r'"(?:\\.|[^"\\])*"' + r"|'(?:\\.|[^'\\])*'")


def _mask_strings(text: str) -> str:
    return _STRING_LIT_RE.sub(lambda m: '"' + "_" * (len(m.group(0)) - 2) + '"', text)


def _java_evidence(text: str, lines: list[str]) -> float:
    score = 0.0
    statementish = [l for l in lines if not l.rstrip().endswith(("{", "}", ")"))]
    if statementish:
        terminated = sum(1 for l in statementish if l.rstrip().endswith(";"))
        score += 0.25 * (terminated / len(statementish))
    if text.count("{") == text.count("}"):
        score += 0.10
    keyword_hits = len(_JAVA_KEYWORDS_RE.findall(text))
    score += 0.25 * min(keyword_hits, 3) / 3
    if _CALL_PATTERN_RE.search(text):
        score += 0.20
    if _TYPE_DECL_HINT_RE.search(text):
        score += 0.20
    if re.search(r"@[A-Z]\w*", text):
        score += 0.05
    return score


def classify_snippet(raw: RawSnippet, *,
                     min_lines: int = 2,
                     validity_threshold: float = 0.5) -> Validity:
    """Deterministic validity label for a raw snippet.

    Non-Java formats (XML, JSON, JavaScript, stack traces) are rejected
    by their own markers; anything else must accumulate enough Java
    evidence to be valid. Sub-threshold snippets shorter than min_lines
    are labelled too-short rather than prose.
    """
    text = raw.text
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines:
        return Validity.TOO_SHORT

    stripped = text.strip()
    xml_tags = _XML_TAG_RE.findall(text)
    generic_like = _GENERIC_TAG_RE.findall(text)
    if stripped.startswith("<?xml") or (
            stripped.startswith("<") and len(xml_tags) >= 2
            and len(xml_tags) > len(generic_like) and ";" not in text):
        return Validity.XML
    if stripped[:1] in "{[" and _JSON_KEY_RE.search(text) and ";" not in text:
        return Validity.JSON
    if _STACK_FRAME_RE.search(text) and (
            _EXCEPTION_HEAD_RE.search(text) or len(_STACK_FRAME_RE.findall(text)) >= 2):
        return Validity.STACKTRACE

    masked = _mask_strings(text)
    java_score = _java_evidence(masked, lines)
    js_hits = len(_JS_MARKERS_RE.findall(masked))
    if js_hits >= 1 and java_score < validity_threshold + 0.1 * js_hits:
        return Validity.JAVASCRIPT

    if java_score >= validity_threshold:
        return Validity.VALID_JAVA
    if len(lines) < min_lines:
        return Validity.TOO_SHORT
    return Validity.PROSE


# --- Java element parsing ---------------------------------------------------

_LINE_COMMENT_RE = re.compile(r"//[^\n]*")
_BLOCK_COMMENT_RE = re.compile(r"/\*.*?\*/", re.DOTALL)

_GENERIC_PART = r"(?:<(?:[^<>=;]|<[^<>=;]*>){0,120}>)?"
_IMPORT_RE = re.compile(r"^\s*import\s+(?:static\s+)?([\w.]+(?:\.\*)?)\s*;", re.MULTILINE)
_LOCAL_DECL_RE = re.compile(r"\b(?:class|interface|enum|record)\s+([A-Z][\w$]*)")
_NEW_RE = re.compile(r"\bnew\s+([A-Z][\w$]*)")
_DECL_VAR_RE = re.compile(
    r"\b([A-Z][\w$]*)\s*" + _GENERIC_PART + r"\s*(?:\[\])*\s+([a-z_$][\w$]*)\s*(?=[=;,):])")
_STATIC_RECV_RE = re.compile(r"\b([A-Z][\w$]*)\s*\.\s*[a-zA-Z_$]\w*")
_ANNOTATION_RE = re.compile(r"@([A-Z][\w$]*)")
_GENERIC_ARGS_RE = re.compile(r"<((?:[^<>=;]|<[^<>=;]*>){1,120})>")
_CATCH_RE = re.compile(r"\bcatch\s*\(\s*([A-Z][\w$]*)")
_EXTENDS_RE = re.compile(r"\b(?:extends|implements|throws)\s+"
                         r"([A-Z][\w$]*(?:\s*,\s*[A-Z][\w$]*)*)")
_CLASS_LITERAL_RE = re.compile(r"\b([A-Z][\w$]*)\s*\.\s*class\b")
_CAST_RE = re.compile(r"\(\s*([A-Z][\w$]*)\s*\)\s*[\w(\"']")
_IDENT_RE = re.compile(r"\b([A-Z][\w$]*)\b")
_CALL_SITE_RE = re.compile(
    r"(new\s+[A-Z][\w$]*\s*(?:<(?:[^<>]|<[^<>]*>)*>)?\s*\([^()]*\)|[\w$)\]]+)"
    r"\s*\.\s*([a-zA-Z_$]\w*)\s*\(")
_NEW_RECV_RE = re.compile(r"^new\s+([A-Z][\w$]*)")


def _is_typename(token: str) -> bool:
    # Real type names have a lowercase letter somewhere; bare ALL_CAPS
    # tokens are constants and single capitals are generic parameters.
    return bool(re.match(r"^[A-Z][\w$]*$", token)) and any(c.islower() for c in token)


def strip_comments(text: str) -> str:
    masked = _mask_strings(text)
    spans = [m.span() for m in _BLOCK_COMMENT_RE.finditer(masked)]
    for match in _LINE_COMMENT_RE.finditer(masked):
        if not any(s <= match.start() < e for s, e in spans):
            spans.append(match.span())
    out = []
    last = 0
    for start, end in sorted(spans):
        if start < last:
            continue
        out.append(text[last:start])
        last = end
    out.append(text[last:])
    return "".join(out)


def _generic_arg_types(text: str) -> set[str]:
    names = set()
    for match in _GENERIC_ARGS_RE.finditer(text):
        inner = match.group(1)
        # Only accept plausible type lists, not comparison expressions.
        if re.search(r"[+*/%]|&&|\|\|", inner):
            continue
        for token in _IDENT_RE.findall(inner):
            if _is_typename(token):
                names.add(token)
    return names


def _receiver_type(receiver_text: str, var_types: dict[str, str]) -> str | None:
    new_recv = _NEW_RECV_RE.match(receiver_text)
    if new_recv:
        return new_recv.group(1)
    if receiver_text in var_types:
        return var_types[receiver_text]
    if _is_typename(receiver_text):
        return receiver_text
    return None


def parse_java_elements(raw: RawSnippet) -> CodeSnippet:
    """Collect types, declared locals, imports and calls from a fragment.

    Falls back to bare token harvesting (flagged ``heuristic``) when the
    structural pass finds nothing in non-empty code.
    """
    code = strip_comments(raw.text)
    masked = re.sub(r"\{\s*\}", " ", _mask_strings(code))

    imports = tuple(_IMPORT_RE.findall(masked))
    local_decls = frozenset(_LOCAL_DECL_RE.findall(masked))

    types: set[str] = set()
    var_types: dict[str, str] = {}
    for match in _DECL_VAR_RE.finditer(masked):
        type_name, var_name = match.group(1), match.group(2)
        if _is_typename(type_name):
            types.add(type_name)
            var_types.setdefault(var_name, type_name)
    for regex in (_NEW_RE, _CATCH_RE, _CLASS_LITERAL_RE, _ANNOTATION_RE,
                  _CAST_RE, _STATIC_RECV_RE):
        for token in regex.findall(masked):
            if _is_typename(token):
                types.add(token)
    for match in _EXTENDS_RE.finditer(masked):
        for token in re.split(r"\s*,\s*", match.group(1)):
            if _is_typename(token):
                types.add(token)
    types |= _generic_arg_types(masked)

    methods: list[tuple[str | None, str]] = []
    for match in _CALL_SITE_RE.finditer(masked):
        receiver = _receiver_type(match.group(1), var_types)
        if receiver is not None and not _is_typename(receiver):
            receiver = None
        methods.append((receiver, match.group(2)))

    heuristic = False
    if not types and not methods and not local_decls:
        harvested = {t for t in _IDENT_RE.findall(masked) if _is_typename(t)}
        if harvested:
            heuristic = True
            types = harvested
            methods = [(None, m) for m in re.findall(r"\.\s*([a-z]\w*)\s*\(", masked)]

    types -= local_decls
    return CodeSnippet(
        raw=raw,
        validity=Validity.VALID_JAVA,
        types_used=frozenset(types),
        methods_called=tuple(methods),
        imports=imports,
        local_decls=local_decls,
        line_count=raw.line_count(),
        heuristic=heuristic,
        var_types=var_types,
    )


def analyze_snippet(raw: RawSnippet, *,
                    min_lines: int = 2,
                    validity_threshold: float = 0.5) -> CodeSnippet:
    """classify_snippet + parse_java_elements in one pass."""
    validity = classify_snippet(raw, min_lines=min_lines,
                                validity_threshold=validity_threshold)
    if validity.is_valid:
        return parse_java_elements(raw)
    return CodeSnippet(raw=raw, validity=validity, line_count=raw.line_count())


# --- dataflow ---------------------------------------------------------------

_ASSIGN_RE = re.compile(
    r"^(?:(?:final\s+)?([A-Z][\w$]*)\s*" + _GENERIC_PART + r"\s*(?:\[\])*\s+)?"
    r"([a-z_$][\w$]*)\s*=(?![=])\s*(.+)$", re.DOTALL)
_VAR_NAME_RE = re.compile(r"^[a-z_$][\w$]*$")


@dataclass
class _CallSite:
    receiver_text: str
    receiver_type: str | None
    method: str
    start: int
    args_span: tuple[int, int]
    args: list[str]
    nested_in: int | None = None  # index of the call whose args contain this one


def _statements(code: str) -> list[str]:
    code = re.sub(r"\{\s*\}", " ", code)  # drop empty anonymous-class bodies
    return [p.strip() for p in re.split(r"[;{}]", code) if p.strip()]


def _split_args(arg_text: str) -> list[str]:
    args, depth, current = [], 0, []
    for ch in arg_text:
        if ch in "(<[":
            depth += 1
        elif ch in ")>]":
            depth = max(0, depth - 1)
        if ch == "," and depth == 0:
            args.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        args.append(tail)
    return [a for a in args if a]


def _calls_in(fragment: str, var_types: dict[str, str]) -> list[_CallSite]:
    calls: list[_CallSite] = []
    for match in _CALL_SITE_RE.finditer(fragment):
        args_start = match.end()
        depth = 0
        pos = args_start
        while pos < len(fragment):
            ch = fragment[pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            pos += 1
        calls.append(_CallSite(
            receiver_text=match.group(1),
            receiver_type=_receiver_type(match.group(1), var_types),
            method=match.group(2),
            start=match.start(),
            args_span=(args_start, pos),
            args=_split_args(fragment[args_start:pos]),
        ))
    # Nesting: smallest enclosing argument span wins.
    for i, call in enumerate(calls):
        best = None
        for j, outer in enumerate(calls):
            if i == j:
                continue
            lo, hi = outer.args_span
            if lo <= call.start < hi:
                if best is None or outer.args_span[1] - outer.args_span[0] < (
                        calls[best].args_span[1] - calls[best].args_span[0]):
                    best = j
        call.nested_in = best
    return calls


def compute_dataflow(snippet: CodeSnippet) -> DataflowFacts:
    """Type-level input/output facts for a parsed valid-java snippet.

    A value produced by a call and never used again (as an argument or
    receiver) is a terminal output; a value consumed by a later call
    becomes an input fact of the consuming call plus an internal edge.
    """
    code = _mask_strings(strip_comments(snippet.text))
    var_types = dict(snippet.var_types)

    # producers: var -> (type, producing method, receiver type of producer)
    producers: dict[str, tuple[str | None, str, str | None]] = {}
    consumed: set[str] = set()
    inputs: set[FlowFact] = set()
    internal: set[tuple[str | None, str, str]] = set()
    outputs: set[FlowFact] = set()

    def consume(name: str, call: _CallSite) -> None:
        if name in producers:
            p_type, p_method, p_recv = producers[name]
            consumed.add(name)
            inputs.add(FlowFact(p_type, call.method, call.receiver_type,
                                p_method, p_recv))
            internal.add((p_type, p_method, call.method))
        elif name in var_types:
            inputs.add(FlowFact(var_types[name], call.method, call.receiver_type))

    for statement in _statements(code):
        assign = _ASSIGN_RE.match(statement)
        target_var = None
        rhs = statement
        if assign:
            decl_type, target_var, rhs = assign.group(1), assign.group(2), assign.group(3)
            if decl_type and _is_typename(decl_type):
                var_types.setdefault(target_var, decl_type)
        calls = _calls_in(rhs, var_types)

        for idx, call in enumerate(calls):
            recv = call.receiver_text
            if _VAR_NAME_RE.match(recv):
                consume(recv, call)
            for arg in call.args:
                if _VAR_NAME_RE.match(arg):
                    consume(arg, call)
            if call.nested_in is not None:
                outer = calls[call.nested_in]
                internal.add((None, call.method, outer.method))
        # Chained receivers: a call whose receiver text ends at a close
        # paren consumes the result of the call that produced that paren.
        for call in calls:
            if call.receiver_text.endswith((")", "]")):
                for other in calls:
                    if other.args_span[1] + 1 == call.start + len(call.receiver_text):
                        internal.add((None, other.method, call.method))

        top_level = [c for c in calls if c.nested_in is None]
        producer_call = top_level[-1] if top_level else None
        if target_var:
            if producer_call is not None:
                producers[target_var] = (var_types.get(target_var),
                                         producer_call.method,
                                         producer_call.receiver_type)
                consumed.discard(target_var)
            else:
                ctor = _NEW_RE.search(rhs)
                if ctor:
                    producers[target_var] = (var_types.get(target_var, ctor.group(1)),
                                             f"new {ctor.group(1)}", None)
                    consumed.discard(target_var)
        elif producer_call is not None and not assign:
            outputs.add(FlowFact(None, producer_call.method,
                                 producer_call.receiver_type))

    for var, (p_type, p_method, p_recv) in producers.items():
        if var not in consumed:
            outputs.add(FlowFact(p_type, p_method, p_recv))

    return DataflowFacts(
        inputs=frozenset(inputs),
        outputs=frozenset(outputs),
        internal_edges=frozenset(internal),
    )

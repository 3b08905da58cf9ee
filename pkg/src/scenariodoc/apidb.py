"""File-backed API database with simple-name lookup and FQN resolution.

The database maps canonical API names to modules, package prefixes,
known types (simple name -> fully qualified name) and methods. A small
fragment covering common Java SE/EE packages ships with the package and
is merged in by default; each official package counts as one API.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

logger = logging.getLogger(__name__)


class ApiDbError(Exception):
    """Raised for unreadable files, bad schema or duplicate API names."""


@dataclass(frozen=True)
class ApiRecord:
    name: str
    modules: tuple[str, ...] = ()
    packages: tuple[str, ...] = ()
    types: dict = None  # simple type name -> FQN
    methods: dict = None  # type name -> tuple of method names
    links: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "types", dict(self.types or {}))
        object.__setattr__(self, "methods",
                           {k: tuple(v) for k, v in (self.methods or {}).items()})

    def type_names(self) -> frozenset[str]:
        return frozenset(self.types)

    def fqn_of(self, simple_name: str) -> str | None:
        return self.types.get(simple_name)


@dataclass(frozen=True)
class FqnCandidate:
    simple_name: str
    fqn: str
    api: ApiRecord
    score: float


_MENTION_CACHE_LIMIT = 4096


class ApiDb:
    """Immutable index over ApiRecords; safe to share across workers."""

    def __init__(self, records: list[ApiRecord],
                 import_weight: float = 1.0,
                 package_weight: float = 0.7,
                 bare_weight: float = 0.5):
        self._records: dict[str, ApiRecord] = {}
        for record in records:
            if record.name in self._records:
                raise ApiDbError(f"duplicate API name: {record.name}")
            self._records[record.name] = record
        self._by_simple: dict[str, list[ApiRecord]] = {}
        for record in records:
            for simple in record.types:
                self._by_simple.setdefault(simple, []).append(record)
        for candidates in self._by_simple.values():
            candidates.sort(key=lambda r: r.name)
        self.import_weight = import_weight
        self.package_weight = package_weight
        self.bare_weight = bare_weight
        self._mention_res: dict[str, re.Pattern] = {}

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(sorted(self._records.values(), key=lambda r: r.name))

    def get(self, name: str) -> ApiRecord | None:
        return self._records.get(name)

    def names(self) -> list[str]:
        return sorted(self._records)

    def apis_with_type(self, simple_name: str) -> list[ApiRecord]:
        return list(self._by_simple.get(simple_name, ()))

    def apis_for_import(self, import_path: str) -> list[ApiRecord]:
        """Records whose package prefixes cover the given import statement."""
        path = import_path[:-2] if import_path.endswith(".*") else import_path
        hits = []
        for record in self:
            for package in record.packages:
                if path == package or path.startswith(package + "."):
                    hits.append(record)
                    break
        return hits

    def _mention_re(self, name: str) -> re.Pattern:
        pattern = self._mention_res.get(name)
        if pattern is None:
            variants = [re.escape(name).replace(r"\ ", r"\s+")]
            # A multiword name is also recognized by its distinctive last word
            # ("Google Gson" -> "gson"); dotted names must match in full.
            if " " in name:
                last = name.split()[-1]
                if len(last) >= 4 and "." not in last:
                    variants.append(re.escape(last))
            pattern = re.compile(
                r"(?<![\w.])(?:" + "|".join(variants) + r")(?![\w.])",
                re.IGNORECASE,
            )
            if len(self._mention_res) < _MENTION_CACHE_LIMIT:
                self._mention_res[name] = pattern
        return pattern

    def mentions(self, record: ApiRecord, text: str) -> bool:
        """True when the API name is referenced in free text."""
        return bool(self._mention_re(record.name).search(text))

    def resolve_fqn(self, simple_name: str,
                    imports: tuple[str, ...] = (),
                    package_prefixes: tuple[str, ...] = ()) -> list[FqnCandidate]:
        """Rank APIs that provide a type with the given simple name.

        An explicit import scores import_weight (1.0 by default), a
        package-prefix context match scores package_weight, and a bare
        lookup scores bare_weight split uniformly across candidates.
        Unknown names yield an empty list.
        """
        records = self._by_simple.get(simple_name, ())
        if not records:
            return []
        explicit = {imp for imp in imports if not imp.endswith(".*")}
        wildcards = tuple(imp[:-2] for imp in imports if imp.endswith(".*"))
        candidates = []
        share = self.bare_weight / len(records)
        for record in records:
            fqn = record.types[simple_name]
            score = share
            package = fqn.rsplit(".", 1)[0] if "." in fqn else ""
            if any(package == prefix or package.startswith(prefix + ".")
                   for prefix in package_prefixes if prefix):
                score = max(score, self.package_weight)
            if fqn in explicit or any(package == w for w in wildcards):
                score = max(score, self.import_weight)
            candidates.append(FqnCandidate(simple_name, fqn, record, score))
        candidates.sort(key=lambda c: (-c.score, c.fqn))
        return candidates


def _record_from_dict(data: dict) -> ApiRecord:
    name = data.get("name")
    if not name:
        raise ApiDbError("API record without a name")
    record = ApiRecord(
        name=name,
        modules=tuple(data.get("modules", ())),
        packages=tuple(data.get("packages", ())),
        types=dict(data.get("types", {})),
        methods={k: tuple(v) for k, v in data.get("methods", {}).items()},
        links=tuple(data.get("links", ())),
    )
    for simple, fqn in record.types.items():
        if record.packages and not any(
                fqn == p or fqn.startswith(p + ".") for p in record.packages):
            raise ApiDbError(
                f"API {name}: FQN {fqn} outside declared packages")
    return record


def builtin_java_records() -> list[ApiRecord]:
    """The bundled Java SE/EE package fragment."""
    raw = resources.files("scenariodoc.data").joinpath("java_builtin_apidb.json")
    data = json.loads(raw.read_text(encoding="utf-8"))
    return [_record_from_dict(entry) for entry in data]


def load_api_db(path: str | Path, *,
                include_builtin: bool = True,
                import_weight: float = 1.0,
                package_weight: float = 0.7,
                bare_weight: float = 0.5) -> ApiDb:
    """Load ``apidb.json``; duplicate API names in the file are fatal.

    Built-in Java SE/EE records are appended for names the file does not
    already define.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ApiDbError(f"cannot read API db {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ApiDbError(f"invalid JSON in API db {path}: {exc}") from exc
    if not isinstance(data, list):
        raise ApiDbError("API db must be a JSON array of records")
    records = [_record_from_dict(entry) for entry in data]
    seen = {r.name for r in records}
    if len(seen) != len(records):
        # ApiDb would catch this too; fail here with a clearer message.
        names = [r.name for r in records]
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ApiDbError(f"duplicate API name(s) in {path}: {', '.join(dupes)}")
    if include_builtin:
        for record in builtin_java_records():
            if record.name not in seen:
                records.append(record)
    return ApiDb(records, import_weight=import_weight,
                 package_weight=package_weight, bare_weight=bare_weight)

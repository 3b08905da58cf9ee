"""Documentation bundle generation, persistence and read-only lookup.

``generate_bundles`` runs the whole pipeline (corpus -> scenarios ->
three documentation views) and writes one bundle JSON per API plus the
per-view exports and a manifest. Output is deterministic: the bundle
timestamp derives from the newest post in the corpus and every map is
sorted, so two runs over the same inputs are byte-identical. The
manifest is written last via an atomic replace; readers never observe a
half-written generation.
"""

from __future__ import annotations

import json
import logging
import os
import re
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .apidb import ApiDb, load_api_db
from .concepts import Concept, build_concept_documentation
from .config import Config
from .corpus import Corpus, load_corpus
from .miner import (UsageScenario, mine, read_scenarios, scenario_to_json,
                    scenarios_by_api, write_scenarios)
from .stats import build_statistical_summary
from .typedocs import build_type_buckets

logger = logging.getLogger(__name__)

VIEWS = ("stats", "concepts", "types", "all")


class NotFoundError(KeyError):
    """Unknown API or missing bundle; carries a machine-readable payload."""

    def __init__(self, api: str, message: str | None = None):
        super().__init__(api)
        self.api = api
        self.payload = {
            "error": "not_found",
            "api": api,
            "message": message or f"no documentation bundle for API '{api}'",
        }


def api_slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    return slug or "api"


def _concept_to_json(concept: Concept) -> dict:
    return {
        "id": concept.id,
        "title": concept.title,
        "rating": concept.rating.to_json() if concept.rating else None,
        "representative": scenario_to_json(concept.representative),
        "see_also": [scenario_to_json(s) for s in concept.see_also],
        "patterns": [
            {"itemset": sorted(p.itemset), "support": p.support}
            for p in concept.patterns
        ],
    }


def _bucket_to_json(bucket) -> dict:
    return {
        "type": bucket.type_name,
        "fqn": bucket.fqn,
        "rating": bucket.rating.to_json() if bucket.rating else None,
        "scenarios": [scenario_to_json(s) for s in bucket.scenarios],
    }


def build_bundle(api_name: str, scenarios: list[UsageScenario],
                 api_db: ApiDb, config: Config,
                 generated_at: str) -> dict:
    """The full DocBundle document for one API."""
    record = api_db.get(api_name)
    stats = build_statistical_summary(record, scenarios, api_db)
    concept_list = build_concept_documentation(
        record, scenarios,
        min_support=config.concepts.min_support,
        clone_threshold=config.concepts.clone_threshold,
        clone_min_lines=config.concepts.clone_min_lines)
    buckets = build_type_buckets(record, scenarios)
    return {
        "api": api_name,
        "generated_at": generated_at,
        "config_hash": config.hash(),
        "scenario_count": len(scenarios),
        "stats": stats.to_json(),
        "concepts": [_concept_to_json(c) for c in concept_list],
        "types": [_bucket_to_json(b) for b in buckets],
    }


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n",
                    encoding="utf-8")


def _atomic_write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def corpus_generated_at(corpus: Corpus) -> str:
    """Deterministic bundle timestamp: the newest post in the corpus."""
    newest = None
    for thread in corpus.threads:
        for post in thread.posts():
            if newest is None or post.created_at > newest:
                newest = post.created_at
    if newest is None:
        newest = datetime(1970, 1, 1, tzinfo=timezone.utc)
    return newest.isoformat()


def document_scenarios(scenarios: list[UsageScenario], api_db: ApiDb,
                       out_dir: str | Path, config: Config,
                       generated_at: str) -> dict:
    """Write per-API bundles, per-view exports and the manifest."""
    out_dir = Path(out_dir)
    grouped = scenarios_by_api(scenarios)
    entries = []
    for api_name in sorted(grouped):
        api_scenarios = grouped[api_name]
        if api_db.get(api_name) is None:
            logger.warning("skipping %s: not in the API db", api_name)
            continue
        slug = api_slug(api_name)
        try:
            bundle = build_bundle(api_name, api_scenarios, api_db, config,
                                  generated_at)
        except Exception:
            # One bad API never blocks the rest of the generation.
            logger.exception("failed to document API %s", api_name)
            continue
        _write_json(out_dir / "bundles" / f"{slug}.json", bundle)
        _write_json(out_dir / "stats" / f"{slug}.json", bundle["stats"])
        _write_json(out_dir / "concepts" / f"{slug}.json", bundle["concepts"])
        _write_json(out_dir / "types" / f"{slug}.json", bundle["types"])
        entries.append({
            "name": api_name,
            "slug": slug,
            "scenario_count": len(api_scenarios),
        })
    entries.sort(key=lambda e: (-e["scenario_count"], e["name"]))
    manifest = {
        "apis": entries,
        "generated_at": generated_at,
        "config_hash": config.hash(),
    }
    _atomic_write_json(out_dir / "manifest.json", manifest)
    return manifest


def generate_bundles(corpus_path: str | Path, apidb_path: str | Path,
                     out_dir: str | Path,
                     config: Config | None = None) -> dict:
    """Batch entry point: corpus file + API db -> bundle directory."""
    config = config or Config()
    corpus = load_corpus(corpus_path, format=config.corpus.format)
    api_db = load_api_db(
        apidb_path,
        include_builtin=config.apidb.include_builtin,
        import_weight=config.apidb.import_weight,
        package_weight=config.apidb.package_weight,
        bare_weight=config.apidb.bare_weight)
    result = mine(corpus, api_db, config)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_scenarios(result.scenarios, out_dir / "scenarios.json")
    manifest = document_scenarios(result.scenarios, api_db, out_dir, config,
                                  corpus_generated_at(corpus))
    logger.info("documented %d APIs from %d scenarios (%d dropped records)",
                len(manifest["apis"]), len(result.scenarios),
                sum(result.report.drops.values()))
    return manifest


class BundleStore:
    """Read-only view over a generated bundle directory."""

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)
        self._manifest = None
        self._bundles: dict[str, dict] = {}

    @property
    def manifest(self) -> dict:
        if self._manifest is None:
            path = self.out_dir / "manifest.json"
            if not path.exists():
                raise FileNotFoundError(f"no manifest.json under {self.out_dir}")
            self._manifest = json.loads(path.read_text(encoding="utf-8"))
        return self._manifest

    def _entry(self, api: str) -> dict:
        wanted = api.casefold()
        for entry in self.manifest["apis"]:
            if entry["name"].casefold() == wanted:
                return entry
        raise NotFoundError(api)

    def search_apis(self, prefix: str, limit: int = 10) -> list[dict]:
        """Case-insensitive prefix suggestions ranked by scenario count.

        An empty prefix lists the top APIs (front-page behaviour).
        """
        needle = (prefix or "").casefold()
        hits = [
            {"name": e["name"], "scenario_count": e["scenario_count"]}
            for e in self.manifest["apis"]
            if e["name"].casefold().startswith(needle)
        ]
        hits.sort(key=lambda e: (-e["scenario_count"], e["name"]))
        return hits[:max(0, limit)]

    def get_bundle(self, api: str) -> dict:
        entry = self._entry(api)
        name = entry["name"]
        if name not in self._bundles:
            path = self.out_dir / "bundles" / f"{entry['slug']}.json"
            if not path.exists():
                raise NotFoundError(api, f"bundle file missing for '{api}'")
            self._bundles[name] = json.loads(path.read_text(encoding="utf-8"))
        return self._bundles[name]

    def get_documentation(self, api: str, view: str = "all") -> dict:
        """One view of an API's bundle; raises NotFoundError when absent."""
        if view not in VIEWS:
            raise ValueError(f"unknown view '{view}', expected one of {VIEWS}")
        bundle = self.get_bundle(api)
        if view == "all":
            return bundle
        payload = {
            "api": bundle["api"],
            "generated_at": bundle["generated_at"],
            view: bundle[view],
        }
        return payload


def search_apis(store: BundleStore, prefix: str, limit: int = 10) -> list[dict]:
    return store.search_apis(prefix, limit)


def get_documentation(store: BundleStore, api: str, view: str = "all") -> dict:
    return store.get_documentation(api, view)

"""Command line entry points: mine, document, serve, report, all."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from .apidb import load_api_db
from .bundle import (BundleStore, NotFoundError, corpus_generated_at,
                     document_scenarios, generate_bundles)
from .config import Config, load_config
from .corpus import CorpusLoadError, load_corpus
from .miner import mine, read_scenarios, write_scenarios

logger = logging.getLogger(__name__)


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _load_effective_config(config_path: str | None, *, corpus_format: str | None,
                           min_support: int | None, clone_threshold: float | None,
                           include_questions: bool | None = None) -> Config:
    config = load_config(config_path)
    if corpus_format:
        config.corpus.format = corpus_format
    if include_questions is not None:
        config.corpus.include_questions = include_questions
    if min_support is not None:
        config.concepts.min_support = min_support
    if clone_threshold is not None:
        config.concepts.clone_threshold = clone_threshold
    return config


@click.group()
@click.option("--verbose", is_flag=True, help="Debug logging.")
def main(verbose: bool) -> None:
    """Mine API usage scenarios and build documentation bundles."""
    _setup_logging(verbose)


@main.command("mine")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--apidb", "apidb_path", required=True, type=click.Path())
@click.option("--out", "out_path", default="scenarios.json", type=click.Path())
@click.option("--format", "corpus_format",
              type=click.Choice(["json-lines", "xml-dump"]), default=None)
@click.option("--include-questions", is_flag=True, default=None,
              help="Also mine snippets from question posts.")
@click.option("--config", "config_path", default=None, type=click.Path())
def mine_command(corpus_path, apidb_path, out_path, corpus_format,
                 include_questions, config_path) -> None:
    """Mine a corpus into scenarios.json."""
    config = _load_effective_config(config_path, corpus_format=corpus_format,
                                    min_support=None, clone_threshold=None,
                                    include_questions=include_questions)
    try:
        corpus = load_corpus(corpus_path, format=config.corpus.format)
    except CorpusLoadError as exc:
        raise click.ClickException(str(exc))
    api_db = load_api_db(apidb_path,
                         include_builtin=config.apidb.include_builtin)
    result = mine(corpus, api_db, config)
    write_scenarios(result.scenarios, out_path)
    click.echo(f"mined {len(result.scenarios)} scenarios from "
               f"{result.report.threads} threads -> {out_path}")
    for reason, count in sorted(result.report.drops.items()):
        click.echo(f"  dropped {count}: {reason}")


@main.command("document")
@click.option("--scenarios", "scenarios_path", required=True, type=click.Path())
@click.option("--apidb", "apidb_path", required=True, type=click.Path())
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--min-support", type=int, default=None)
@click.option("--clone-threshold", type=float, default=None)
@click.option("--config", "config_path", default=None, type=click.Path())
def document_command(scenarios_path, apidb_path, out_dir, min_support,
                     clone_threshold, config_path) -> None:
    """Build documentation bundles from a scenarios.json file."""
    config = _load_effective_config(config_path, corpus_format=None,
                                    min_support=min_support,
                                    clone_threshold=clone_threshold)
    scenarios = read_scenarios(scenarios_path)
    api_db = load_api_db(apidb_path,
                         include_builtin=config.apidb.include_builtin)
    newest = max((s.created_at for s in scenarios), default=None)
    generated_at = newest.isoformat() if newest else "1970-01-01T00:00:00+00:00"
    manifest = document_scenarios(scenarios, api_db, out_dir, config, generated_at)
    click.echo(f"documented {len(manifest['apis'])} APIs -> {out_dir}")


@main.command("serve")
@click.option("--bundles", "bundle_dir", required=True, type=click.Path())
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8080)
@click.option("--frontend", "frontend_dir", default=None, type=click.Path(),
              help="Optional static directory for the browser UI.")
def serve_command(bundle_dir, host, port, frontend_dir) -> None:
    """Serve bundles over HTTP (read-only)."""
    from .server import serve

    if not (Path(bundle_dir) / "manifest.json").exists():
        raise click.ClickException(f"no manifest.json under {bundle_dir}")
    click.echo(f"serving {bundle_dir} on http://{host}:{port}")
    serve(bundle_dir, host=host, port=port, frontend_dir=frontend_dir)


@main.command("report")
@click.option("--bundles", "bundle_dir", required=True, type=click.Path())
@click.option("--api", "api_name", required=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def report_command(bundle_dir, api_name, out_dir) -> None:
    """Render an API's charts to PNG figures with CSV exports."""
    from .report import write_report

    store = BundleStore(bundle_dir)
    try:
        bundle = store.get_bundle(api_name)
    except NotFoundError as exc:
        raise click.ClickException(exc.payload["message"])
    files = write_report(bundle, out_dir)
    for path in files:
        click.echo(str(path))


@main.command("all")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--apidb", "apidb_path", required=True, type=click.Path())
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--format", "corpus_format",
              type=click.Choice(["json-lines", "xml-dump"]), default=None)
@click.option("--min-support", type=int, default=None)
@click.option("--clone-threshold", type=float, default=None)
@click.option("--port", type=int, default=None,
              help="Serve the bundles after generating them.")
@click.option("--frontend", "frontend_dir", default=None, type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path())
def all_command(corpus_path, apidb_path, out_dir, corpus_format, min_support,
                clone_threshold, port, frontend_dir, config_path) -> None:
    """Mine, document and (optionally) serve in one go."""
    config = _load_effective_config(config_path, corpus_format=corpus_format,
                                    min_support=min_support,
                                    clone_threshold=clone_threshold)
    try:
        manifest = generate_bundles(corpus_path, apidb_path, out_dir, config)
    except CorpusLoadError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"documented {len(manifest['apis'])} APIs -> {out_dir}")
    if port is not None:
        from .server import serve

        click.echo(f"serving on http://127.0.0.1:{port}")
        serve(out_dir, port=port, frontend_dir=frontend_dir)


if __name__ == "__main__":
    sys.exit(main())

from __future__ import annotations

import json
from pathlib import Path

import pytest

from scenariodoc.apidb import load_api_db
from scenariodoc.bundle import generate_bundles
from scenariodoc.config import Config
from scenariodoc.corpus import load_corpus
from scenariodoc.miner import mine

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_manifest() -> dict:
    return json.loads((FIXTURES / "corpus_manifest.json").read_text())


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(FIXTURES / "threads.jsonl")


@pytest.fixture(scope="session")
def api_db():
    return load_api_db(FIXTURES / "apidb.json")


@pytest.fixture(scope="session")
def config() -> Config:
    return Config()


@pytest.fixture(scope="session")
def mining_result(corpus, api_db, config):
    return mine(corpus, api_db, config)


@pytest.fixture(scope="session")
def scenarios(mining_result):
    return mining_result.scenarios


@pytest.fixture(scope="session")
def bundle_dir(tmp_path_factory, config) -> Path:
    out = tmp_path_factory.mktemp("bundles")
    generate_bundles(FIXTURES / "threads.jsonl", FIXTURES / "apidb.json", out, config)
    return out


def scenarios_for(scenarios, api: str, thread: str | None = None):
    picked = [s for s in scenarios if s.api == api]
    if thread is not None:
        picked = [s for s in picked if s.thread_id == thread]
    return picked

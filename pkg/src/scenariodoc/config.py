"""Pipeline configuration: defaults, TOML file, env override and hashing."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

# Environment variable naming an alternate config file.
ENV_CONFIG_PATH = "SCENARIODOC_CONFIG"


@dataclass
class CorpusConfig:
    format: str = "json-lines"
    include_questions: bool = False
    post_url_template: str = "https://stackoverflow.com/a/{post_id}"


@dataclass
class SnippetConfig:
    # Snippets below min_lines with weak Java evidence are invalid(too-short).
    min_lines: int = 2
    validity_threshold: float = 0.5


@dataclass
class SentimentConfig:
    detector: str = "lexicon"
    neutral_band: float = 1.0
    negation_window: int = 3


@dataclass
class ApiDbConfig:
    import_weight: float = 1.0
    package_weight: float = 0.7
    bare_weight: float = 0.5
    include_builtin: bool = True


@dataclass
class LinkingConfig:
    type_weight: float = 0.7
    mention_weight: float = 0.3
    floor: float = 0.2


@dataclass
class DescriptionConfig:
    max_sentences: int = 3
    damping: float = 0.85
    iterations: int = 30
    beam_width: int = 5
    redundancy_penalty: float = 0.3


@dataclass
class ConceptConfig:
    min_support: int = 2
    clone_threshold: float = 0.6
    clone_min_lines: int = 5


@dataclass
class Config:
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    snippets: SnippetConfig = field(default_factory=SnippetConfig)
    sentiment: SentimentConfig = field(default_factory=SentimentConfig)
    apidb: ApiDbConfig = field(default_factory=ApiDbConfig)
    linking: LinkingConfig = field(default_factory=LinkingConfig)
    description: DescriptionConfig = field(default_factory=DescriptionConfig)
    concepts: ConceptConfig = field(default_factory=ConceptConfig)

    def to_dict(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        """Stable digest of the effective configuration."""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ConfigError(Exception):
    """Raised for unreadable or structurally invalid config files."""


def _apply_section(section_obj, values: dict, where: str) -> None:
    known = {f.name: f.type for f in fields(section_obj)}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(f"unknown config key {where}.{key}")
        setattr(section_obj, key, value)


def load_config(path: str | Path | None = None) -> Config:
    """Load configuration from a TOML file, falling back to defaults.

    Resolution order: explicit ``path`` argument, then the file named by
    the SCENARIODOC_CONFIG environment variable, then built-in defaults.
    """
    if path is None:
        path = os.environ.get(ENV_CONFIG_PATH) or None
    config = Config()
    if path is None:
        return config
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    for section, values in data.items():
        if not hasattr(config, section) or not is_dataclass(getattr(config, section)):
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(values, dict):
            raise ConfigError(f"config section [{section}] must be a table")
        _apply_section(getattr(config, section), values, section)
    return config

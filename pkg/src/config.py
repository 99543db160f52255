import json
import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = 'data/settings.json'


@dataclass(frozen=True)
class Settings:
    depth: int = 4
    bound: int = 10 ** 4
    exhaustive_cap: int = 1000
    layered_search_cap: int = 50
    max_layer_candidates: int = 200000
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{item.name} must be an integer, got {value!r}")
        if self.depth < 1:
            raise ConfigError("depth must be at least 1")
        if self.bound < 0:
            raise ConfigError("bound must be nonnegative")
        if self.exhaustive_cap < 2 or self.layered_search_cap < 2:
            raise ConfigError("search caps must be at least 2")
        if self.max_layer_candidates < 1:
            raise ConfigError("max_layer_candidates must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def as_dict(self):
        return asdict(self)

    def with_overrides(self, **overrides) -> 'Settings':
        """Apply the overrides that are not None."""
        given = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **given) if given else self


def load_settings(path: Optional[str] = None) -> Settings:
    """Defaults updated from a JSON file.

    An explicit path must exist; the default path is optional.
    """
    settings_path = Path(path or DEFAULT_SETTINGS_PATH)
    if not settings_path.exists():
        if path is not None:
            raise ConfigError(f"Settings file not found: {settings_path}")
        return Settings()
    try:
        with open(settings_path, 'r') as f:
            data = json.load(f)
    except Exception as e:
        raise ConfigError(f"Failed to load settings: {str(e)}")
    if not isinstance(data, dict):
        raise ConfigError("Settings file must hold a JSON object")
    known = {item.name for item in fields(Settings)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown settings: {', '.join(unknown)}")
    logger.debug("settings from %s: %s", settings_path, data)
    return Settings(**data)

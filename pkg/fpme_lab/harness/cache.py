import hashlib
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional

import numpy as np

from fpme_lab.errors import ReportIOError

__all__ = ["CACHE_ENV", "default_cache_dir", "parameter_hash", "ResultCache"]

logger = logging.getLogger(__name__)

CACHE_ENV = "FPME_CACHE_DIR"

Arrays = Dict[str, np.ndarray]


def default_cache_dir() -> Path:
    override = os.environ.get(CACHE_ENV)
    if override:
        return Path(override)
    return Path.home() / ".cache" / "fpme_lab"


def _canonical(value):
    if isinstance(value, Mapping):
        return {str(key): _canonical(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(item) for item in value]
    if isinstance(value, np.ndarray):
        return _canonical(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value


def parameter_hash(stage: str, params: Mapping) -> str:
    """sha256 of the stage name and its parameters as canonical JSON."""
    text = json.dumps({"stage": stage, "params": _canonical(params)}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ResultCache:
    """
    Stage results stored as .npz files keyed by a parameter hash.

    ResultCache(directory=path, enabled=True)

    A stage re-runs only when its own parameters change. A disabled cache
    always computes and never writes.
    """

    directory: Optional[Path] = None
    enabled: bool = True

    @property
    def root(self) -> Path:
        return Path(self.directory) if self.directory is not None else default_cache_dir()

    def path_for(self, stage: str, params: Mapping) -> Path:
        return self.root / stage / f"{parameter_hash(stage, params)}.npz"

    def load(self, stage: str, params: Mapping) -> Optional[Arrays]:
        if not self.enabled:
            return None

        path = self.path_for(stage, params)
        if not path.is_file():
            return None

        try:
            with np.load(path, allow_pickle=False) as data:
                arrays = {key: data[key] for key in data.files}
        except (OSError, ValueError) as error:
            logger.warning("ignoring unreadable cache entry %s: %s", path, error)
            return None

        logger.info("cache hit for %s (%s)", stage, path.name[:12])
        return arrays

    def store(self, stage: str, params: Mapping, arrays: Arrays) -> None:
        if not self.enabled:
            return

        path = self.path_for(stage, params)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            partial = path.with_suffix(".partial.npz")
            np.savez(partial, **arrays)
            partial.replace(path)
        except OSError as error:
            raise ReportIOError(path, error) from error

    def fetch(self, stage: str, params: Mapping, compute: Callable[[], Arrays]) -> Arrays:
        """Cached arrays for the stage, computing and storing them on a miss."""
        arrays = self.load(stage, params)
        if arrays is None:
            arrays = compute()
            self.store(stage, params, arrays)
        return arrays

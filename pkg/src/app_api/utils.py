import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Iterable, TypeVar

import yaml

from src.knot_algebra.exceptions import ArgumentError


T = TypeVar("T")
R = TypeVar("R")

RESOURCE_CAP_ENV = "KNOTFORGE_RESOURCE_CAP"
FALLBACK_RESOURCE_CAP = 50_000_000


def get_repo_root() -> Path:
    """
    Returns a pathlib.Path object representing the root directory of this repo.
    """
    return Path(__file__).parent.parent.parent.absolute()


def get_defaults_path() -> Path:
    return get_repo_root() / "src" / "app_api" / "AppData" / "defaults.yaml"


@lru_cache(maxsize=1)
def read_defaults() -> dict[str, Any]:
    """
    The parsed AppData/defaults.yaml, or an empty dict if the file is missing.
    """
    path = get_defaults_path()
    if not path.exists():
        return {}
    with open(path, "r") as file:
        return yaml.load(file, yaml.SafeLoader) or {}


def get_resource_cap() -> int:
    """
    The largest rows x columns product a relation matrix may reach. The environment variable
    KNOTFORGE_RESOURCE_CAP wins over the defaults file.
    """
    from_env = os.environ.get(RESOURCE_CAP_ENV)
    if from_env:
        try:
            return int(from_env)
        except ValueError:
            raise ArgumentError(f"{RESOURCE_CAP_ENV} must be an integer, got {from_env!r}")
    return int(read_defaults().get("resource_cap", FALLBACK_RESOURCE_CAP))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """
    Maps `fn` over `items` on a thread pool. Results come back in input order, so callers that
    merge them sequentially get the same output for every thread count.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))

"""Size bounds for exhaustive routines.

``CAPSTAB_ORACLE_MAX_EDGES`` overrides the general bound (default 12) used by
the exact odd-cycle engine, basic-optimum enumeration and stabilizer search.
"""

import os


class ScaleError(ValueError):
    """An exhaustive routine was asked to run above its configured size bound."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{name} must be non-negative")
    return value


def oracle_max_edges() -> int:
    return _env_int("CAPSTAB_ORACLE_MAX_EDGES", 12)


MAX_MATCHING_EDGES = 14
MAX_POLYTOPE_EDGES = 8


def require(size: int, bound: int, what: str) -> None:
    if size > bound:
        raise ScaleError(f"{what}: {size} edges exceeds the bound of {bound}")

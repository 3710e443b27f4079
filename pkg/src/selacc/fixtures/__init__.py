"""Bundled example score matrices.

* ``exemplar_5x4.csv`` - the small 5-instance, 4-algorithm matrix used
  throughout the docs and tests; column means 52.6/52.6/59.4/60.6 (%),
  oracle mean 77.8%.
* ``binary_100x4.csv`` - one-hot 100x4 matrix with win counts
  21/24/27/28.
* ``benchmark_100x4.csv`` - 100x4 percent matrix with column means
  76.78/84.03/85.53/92.50 and oracle mean 94.70.

Regenerate with ``python scripts/gen_fixtures.py`` from the repo root.
"""

from __future__ import annotations

from pathlib import Path

_HERE = Path(__file__).resolve().parent

FIXTURE_NAMES = ("exemplar_5x4.csv", "binary_100x4.csv", "benchmark_100x4.csv")


def fixture_path(name: str) -> Path:
    """Absolute path of a bundled fixture CSV."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    return _HERE / name

"""Backend selection for the trial-assembly kernels.

Prefers the compiled extension; falls back to the numpy implementation
when the extension is missing or when ``SELACC_PURE_PYTHON`` is set to a
non-empty value.  Both produce bit-identical selections by contract.
"""

from __future__ import annotations

import os

from . import _sim_fallback

if os.environ.get("SELACC_PURE_PYTHON", "").strip():
    _impl = _sim_fallback
else:
    try:
        from . import _sim_kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _sim_fallback

BACKEND_NAME: str = _impl.BACKEND_NAME
exact_count_picks = _impl.exact_count_picks
bernoulli_picks = _impl.bernoulli_picks


def backend_name() -> str:
    """Name of the active trial-kernel backend: "compiled" or "numpy"."""
    return BACKEND_NAME

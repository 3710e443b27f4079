"""Pure numpy implementation of the trial-assembly kernels.

Both backends receive identical pre-generated draws and return identical
integer selection matrices; score means are computed by the caller so
results cannot drift between backends.

Contract shared with the compiled kernel:

* ``u``, ``v``: float64 (trials, n) draws in [0, 1).
* ``best``: int64 (n,) row-best column per instance.
* ``cand_flat``/``cand_off``: CSR-style wrong-pick candidate lists; row i
  owns ``cand_flat[cand_off[i]:cand_off[i+1]]``.  An empty row falls back
  to the best pick (no wrong choice exists).
* exact-count: the ``n_wrong`` rows with the smallest u values (ties by
  lower row index) take a wrong pick; candidate index is trunc(v * width).
* bernoulli: row i takes a wrong pick iff u >= accuracy.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def exact_count_picks(u, v, best, cand_flat, cand_off, n_wrong):
    trials, n = u.shape
    sel = np.tile(best, (trials, 1))
    if n_wrong <= 0:
        return sel
    order = np.argsort(u, axis=1, kind="stable")
    err = order[:, :n_wrong]
    widths = np.diff(cand_off)
    w = widths[err]
    vv = np.take_along_axis(v, err, axis=1)
    idx = (vv * w).astype(np.int64)
    np.minimum(idx, np.maximum(w - 1, 0), out=idx)
    pos = np.where(w > 0, cand_off[err] + idx, 0)
    if cand_flat.size:
        picks = cand_flat[pos]
    else:
        picks = np.zeros_like(err)
    picks = np.where(w > 0, picks, best[err])
    np.put_along_axis(sel, err, picks, axis=1)
    return sel


def bernoulli_picks(u, v, accuracy, best, cand_flat, cand_off):
    trials, n = u.shape
    bcast = np.broadcast_to(best, (trials, n))
    widths = np.diff(cand_off)
    w = np.broadcast_to(widths, (trials, n))
    idx = (v * w).astype(np.int64)
    np.minimum(idx, np.maximum(w - 1, 0), out=idx)
    pos = np.where(w > 0, cand_off[:-1] + idx, 0)
    if cand_flat.size:
        picks = cand_flat[pos]
    else:
        picks = bcast
    picks = np.where(w > 0, picks, bcast)
    wrong = u >= accuracy
    return np.where(wrong, picks, bcast).astype(np.int64, copy=False)

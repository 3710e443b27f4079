"""The compiled kernel and the numpy fallback must agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from selacc import _backend, _sim_fallback

compiled = pytest.importorskip("selacc._sim_kernel")


def _random_problem(rng, trials, n, m):
    u = rng.random((trials, n))
    v = rng.random((trials, n))
    scores = rng.random((n, m))
    best = scores.argmax(axis=1).astype(np.int64)
    # candidate lists of varying width, mimicking each wrong-pick policy
    flat, off = [], [0]
    for i in range(n):
        others = [j for j in range(m) if j != best[i]]
        take = rng.integers(0, len(others) + 1)
        flat.extend(others[: int(take)])
        off.append(len(flat))
    return (
        u,
        v,
        best,
        np.asarray(flat, dtype=np.int64),
        np.asarray(off, dtype=np.int64),
    )


@pytest.mark.parametrize("seed", [0, 1, 99])
@pytest.mark.parametrize("n_wrong_frac", [0.0, 0.3, 1.0])
def test_exact_count_kernels_identical(seed, n_wrong_frac):
    rng = np.random.default_rng(seed)
    u, v, best, flat, off = _random_problem(rng, trials=37, n=23, m=5)
    n_wrong = int(round(n_wrong_frac * 23))
    a = compiled.exact_count_picks(u, v, best, flat, off, n_wrong)
    b = _sim_fallback.exact_count_picks(u, v, best, flat, off, n_wrong)
    assert np.array_equal(a, b)
    assert a.dtype == np.int64


@pytest.mark.parametrize("seed", [2, 3])
@pytest.mark.parametrize("accuracy", [0.0, 0.4, 0.97, 1.0])
def test_bernoulli_kernels_identical(seed, accuracy):
    rng = np.random.default_rng(seed)
    u, v, best, flat, off = _random_problem(rng, trials=29, n=17, m=4)
    a = compiled.bernoulli_picks(u, v, accuracy, best, flat, off)
    b = _sim_fallback.bernoulli_picks(u, v, accuracy, best, flat, off)
    assert np.array_equal(a, b)


def test_exact_count_with_duplicate_u_values():
    # ties in u exercise the sort's index-based tie-break
    trials, n = 11, 12
    u = np.tile(np.repeat([0.25, 0.5, 0.75], 4), (trials, 1))
    v = np.random.default_rng(5).random((trials, n))
    best = np.arange(n, dtype=np.int64) % 3
    flat = np.asarray([(b + 1) % 3 for b in best], dtype=np.int64)
    off = np.arange(n + 1, dtype=np.int64)
    for n_wrong in (0, 1, 5, n):
        a = compiled.exact_count_picks(u, v, best, flat, off, n_wrong)
        b = _sim_fallback.exact_count_picks(u, v, best, flat, off, n_wrong)
        assert np.array_equal(a, b)


def test_empty_candidate_rows_keep_best():
    # a row with no wrong candidates falls back to the best pick even when
    # chosen as an error position
    trials, n = 3, 4
    rng = np.random.default_rng(8)
    u, v = rng.random((trials, n)), rng.random((trials, n))
    best = np.zeros(n, dtype=np.int64)
    flat = np.asarray([], dtype=np.int64)
    off = np.zeros(n + 1, dtype=np.int64)
    for impl in (compiled, _sim_fallback):
        out = impl.exact_count_picks(u, v, best, flat, off, n)
        assert np.array_equal(out, np.zeros((trials, n), dtype=np.int64))


@pytest.mark.skipif(
    bool(os.environ.get("SELACC_PURE_PYTHON", "").strip()),
    reason="fallback was forced via the environment",
)
def test_default_backend_is_compiled():
    assert _backend.BACKEND_NAME == "compiled"


def test_backend_name_is_public():
    import selacc

    assert selacc.backend_name() == _backend.BACKEND_NAME
    assert selacc.backend_name() in ("compiled", "numpy")


def test_env_var_forces_fallback():
    env = dict(os.environ, SELACC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from selacc import _backend; print(_backend.BACKEND_NAME)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"

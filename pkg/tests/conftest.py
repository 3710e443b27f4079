import numpy as np
import pytest

from selacc import ScoreMatrix, fixture_path, load_scores


@pytest.fixture(scope="session")
def exemplar():
    return load_scores(fixture_path("exemplar_5x4.csv"))


@pytest.fixture(scope="session")
def binary100():
    return load_scores(fixture_path("binary_100x4.csv"))


@pytest.fixture(scope="session")
def benchmark100():
    return load_scores(fixture_path("benchmark_100x4.csv"))


@pytest.fixture
def small_random():
    """A reusable 8x3 matrix with distinct values (unique row argmax)."""
    rng = np.random.default_rng(1234)
    scores = rng.permutation(24).reshape(8, 3) / 24.0
    return ScoreMatrix.from_array(scores)

import numpy as np
import pytest

from elasticmds import Configuration, DissimilarityData, pair_distances


def random_instance(rng, n, p, noise=0.3, weights=False):
    """Random data built from a hidden configuration plus multiplicative noise."""
    x = rng.normal(size=(n, p))
    d = pair_distances(Configuration(x))
    delta = d * np.exp(noise * rng.normal(size=d.size)) + 1e-3
    w = rng.uniform(0.2, 2.0, size=d.size) if weights else None
    return DissimilarityData(n, delta, w)


def euclidean_instance(rng, n, p):
    x = rng.normal(size=(n, p))
    return DissimilarityData(n, pair_distances(Configuration(x))), x


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def triangle_config():
    # d = (1, 1, 2) in canonical pair order (2,1), (3,1), (3,2)
    return Configuration(np.array([[0.0], [1.0], [-1.0]]))


ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from gqfi.core import ModelSpec

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_model(rng: np.random.Generator, M: int, n_jump: int, theta: float = 0.0) -> ModelSpec:
    """Random quadratic model with a complex jump matrix."""
    A = rng.normal(size=(2 * M, 2 * M))
    L = rng.normal(size=(n_jump, 2 * M)) + 1j * rng.normal(size=(n_jump, 2 * M))
    return ModelSpec(A + A.T, rng.normal(size=2 * M), L, theta=theta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

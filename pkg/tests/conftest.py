import numpy as np
import pytest

from tdhfbench.fock import enumerate_basis

ACCEPTANCE_LINES: list[str] = []


def jordan_wigner(d: int) -> list[np.ndarray]:
    """Dense annihilators on the 2^d Fock space; bit i of the index is mode i."""
    dim = 1 << d
    ops = []
    for j in range(d):
        c = np.zeros((dim, dim))
        for n in range(dim):
            if (n >> j) & 1:
                sign = (-1) ** bin(n & ((1 << j) - 1)).count("1")
                c[n ^ (1 << j), n] = sign
        ops.append(c)
    return ops


def restrict(op: np.ndarray, d: int, N: int) -> np.ndarray:
    idx = list(enumerate_basis(d, N).states)
    return op[np.ix_(idx, idx)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from qsph.statevector import Operator, StateVector

ACCEPTANCE_LINES = []


def apply_unchecked(state: StateVector, op: Operator, targets) -> StateVector:
    """Brute-force gate application without a unitarity check.

    Builds the full matrix entry by entry: <i|M|j> = op[sub(i), sub(j)] when
    the non-target bits of i and j agree.
    """
    n = state.n_qubits
    targets = list(targets)
    dim = 2**n

    def bit(i, q):
        return (i >> (n - 1 - q)) & 1

    def sub(i):
        out = 0
        for q in targets:
            out = (out << 1) | bit(i, q)
        return out

    rest = [q for q in range(n) if q not in targets]
    full = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            if all(bit(i, q) == bit(j, q) for q in rest):
                full[i, j] = op.matrix[sub(i), sub(j)]
    return StateVector(full @ state.amps)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

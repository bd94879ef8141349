"""Dense statevector engine.

Bit ordering: the first-declared qubit is the most significant bit of the
basis index, so ``|q0 q1 ... q(n-1)>`` sits at index ``q0*2**(n-1) + ...``.
This matches column vectors written out by hand, e.g. ``[u0, u0, u1, u1]``
for ``|velocity> (x) |neighbor>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

MAX_QUBITS = 20
UNITARY_TOL = 1e-12


class UnitarityError(ValueError):
    """Raised when a gate fails the unitarity check."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _qubit_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class StateVector:
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amps))
        n = _qubit_count(amps.size)
        if n < 1 or n > MAX_QUBITS:
            raise ValueError(f"unsupported qubit count {n}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        object.__setattr__(self, "amps", amps)

    @property
    def n_qubits(self) -> int:
        return _qubit_count(self.amps.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def __len__(self):
        return self.amps.size

    def __getitem__(self, idx):
        return self.amps[idx]


@dataclass(frozen=True)
class Operator:
    matrix: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        _qubit_count(m.shape[0])
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return _qubit_count(self.dim)

    @cached_property
    def unitarity_deviation(self) -> float:
        """``max |U^dagger U - I|`` over all entries."""
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))

    def __matmul__(self, other: Operator) -> Operator:
        return Operator(self.matrix @ other.matrix)


def zero_state(n_qubits: int) -> StateVector:
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(amps)


def identity(n_qubits: int = 1) -> Operator:
    return Operator(np.eye(2**n_qubits), name="I")


@lru_cache(maxsize=None)
def hadamard() -> Operator:
    return Operator(np.array([[1, 1], [1, -1]]) / np.sqrt(2), name="H")


def ry(theta: float) -> Operator:
    """Real rotation about Y: ``ry(theta)|0> = [cos(theta/2), sin(theta/2)]``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return Operator(np.array([[c, -s], [s, c]]), name="RY")


@lru_cache(maxsize=None)
def cnot() -> Operator:
    """Controlled-NOT, control on the first target."""
    m = np.eye(4)
    m[[2, 3]] = m[[3, 2]]
    return Operator(m, name="CNOT")


@lru_cache(maxsize=None)
def two_particle_shift() -> Operator:
    """Permutation exchanging ``|01>`` and ``|10>`` (a SWAP)."""
    m = np.eye(4)
    m[[1, 2]] = m[[2, 1]]
    return Operator(m, name="S")


def tensor(a, b):
    """Kronecker product; ``a`` occupies the most significant bits."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps))
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.matrix, b.matrix))
    raise TypeError("tensor() needs two StateVectors or two Operators")


def is_unitary(op: Operator, tol: float = UNITARY_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return op.unitarity_deviation <= tol


def _check_targets(n_qubits: int, op: Operator, targets) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"repeated target qubits {targets}")
    if any(t < 0 or t >= n_qubits for t in targets):
        raise ValueError(f"targets {targets} out of range for {n_qubits} qubits")
    if op.dim != 2 ** len(targets):
        raise ValueError(
            f"operator of dim {op.dim} cannot act on {len(targets)} target qubit(s)"
        )
    return targets


@lru_cache(maxsize=1024)
def _axis_order(n_qubits: int, targets: tuple[int, ...]):
    front = targets + tuple(q for q in range(n_qubits) if q not in targets)
    return front, tuple(np.argsort(front))


def _apply(amps: np.ndarray, n_qubits: int, matrix: np.ndarray, targets) -> np.ndarray:
    front, back = _axis_order(n_qubits, tuple(targets))
    # bring targets to the front (targets[0] most significant), act, restore
    psi = amps.reshape((2,) * n_qubits).transpose(front).reshape(matrix.shape[0], -1)
    out = (matrix @ psi).reshape((2,) * n_qubits).transpose(back)
    return out.reshape(-1)


def apply_operator(state: StateVector, op: Operator, targets) -> StateVector:
    """Apply ``op`` to ``targets``; the first listed target is op's MSB."""
    targets = _check_targets(state.n_qubits, op, targets)
    if not is_unitary(op):
        raise UnitarityError(f"operator {op.name or '<unnamed>'} is not unitary")
    return StateVector(_apply(state.amps, state.n_qubits, op.matrix, targets))


def embed(op: Operator, targets, n_qubits: int) -> Operator:
    """Full ``2**n x 2**n`` matrix of ``op`` acting on ``targets``."""
    targets = _check_targets(n_qubits, op, targets)
    dim = 2**n_qubits
    cols = [_apply(col, n_qubits, op.matrix, targets) for col in np.eye(dim, dtype=complex)]
    return Operator(np.array(cols).T, name=op.name)

"""Quantum reformulation of the SPH advection update.

The neighbor sum is rewritten as an inner product between a normalized
difference state ``|a>`` and a kernel state ``|grad W>``, and the update is
re-expressed through quantum-walk amplitudes ``alpha``. For the two-particle
system the amplitudes define a reversible coin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sph import AdvectionParams, KernelSpec, ParticleLine, grad_w, neighbors_in_support
from .statevector import Operator, embed


class DegenerateStateError(ValueError):
    """The difference vector is zero and cannot be normalized."""


class NoInteractionError(ValueError):
    """No neighbor has a nonzero kernel gradient."""


@dataclass(frozen=True)
class EncodedDifferenceState:
    components: np.ndarray
    norm_a: float

    @property
    def ket(self) -> np.ndarray:
        return self.components / self.norm_a


@dataclass(frozen=True)
class EncodedKernelState:
    components: np.ndarray
    nu: float
    b: np.ndarray

    @property
    def n_neighbors(self) -> int:
        return self.components.size


@dataclass(frozen=True)
class CoinParams:
    alpha00: float
    alpha01: float
    alpha10: float
    alpha11: float
    normalizer: float

    @classmethod
    def from_alpha00(cls, alpha00: float) -> CoinParams:
        off = 1.0 - alpha00
        norm = (alpha00**2 + off**2) ** -0.5
        return cls(alpha00, off, off, alpha00, norm)


def _validate_neighbors(line, j, neighbors):
    neighbors = [int(k) for k in neighbors]
    if not neighbors:
        raise ValueError("neighbor list is empty")
    if j in neighbors:
        raise ValueError(f"particle {j} listed as its own neighbor")
    if any(k < 0 or k >= len(line) for k in neighbors) or not 0 <= j < len(line):
        raise ValueError("particle index out of range")
    return neighbors


def build_difference_state(line: ParticleLine, j: int, neighbors) -> EncodedDifferenceState:
    neighbors = _validate_neighbors(line, j, neighbors)
    comps = (line.u[neighbors] - line.u[j]) * line.dx
    norm = float(np.linalg.norm(comps))
    if norm == 0.0:
        raise DegenerateStateError(f"particle {j} has no difference with its neighbors")
    return EncodedDifferenceState(comps, norm)


def build_kernel_state(
    line: ParticleLine, j: int, neighbors, kernel: KernelSpec
) -> EncodedKernelState:
    neighbors = _validate_neighbors(line, j, neighbors)
    grads = np.array([grad_w(j, k, line, kernel) for k in neighbors])
    nu = float(np.max(np.abs(grads)))
    if nu == 0.0:
        raise NoInteractionError(f"particle {j} has no neighbors inside the kernel support")
    n = grads.size
    re = grads / (nu * n)
    # |re| <= 1/n <= 1/sqrt(n); clip guards the extremal case against rounding
    b = np.sqrt(np.clip(1.0 / n - re**2, 0.0, None))
    return EncodedKernelState(re + 1j * b, nu, b)


def _interacting(line, j, neighbors, kernel):
    if neighbors is None:
        return neighbors_in_support(line, j, kernel)
    neighbors = _validate_neighbors(line, j, neighbors)
    sep = np.abs(line.positions[neighbors] - line.positions[j])
    return [k for k, s in zip(neighbors, sep) if s < kernel.h]


def inner_product_update(
    line: ParticleLine, j: int, params: AdvectionParams, neighbors=None
) -> float:
    """Advance ``u_j`` one step through the inner-product form of the update.

    Neighbors outside the kernel support are dropped before encoding. A zero
    difference vector or an empty support leaves ``u_j`` unchanged.
    """
    u_j = float(line.u[j])
    nbrs = _interacting(line, j, neighbors, params.kernel)
    if not nbrs:
        return u_j
    try:
        a = build_difference_state(line, j, nbrs)
        w = build_kernel_state(line, j, nbrs, params.kernel)
    except (DegenerateStateError, NoInteractionError):
        return u_j
    overlap = np.vdot(a.ket, w.components).real
    return u_j - params.c * params.dt * w.nu * w.n_neighbors * a.norm_a * overlap


def alpha_amplitudes(
    line: ParticleLine, j: int, params: AdvectionParams, neighbors=None
) -> tuple[float, dict[int, float]]:
    """Walk amplitudes ``(alpha_jj, {k: alpha_kj})`` for particle ``j``.

    ``u_j(t+dt) = alpha_jj*u_j + sum_k alpha_kj*u_k`` reproduces the
    classical step.
    """
    nbrs = _interacting(line, j, neighbors, params.kernel)
    if not nbrs:
        return 1.0, {}
    w = build_kernel_state(line, j, nbrs, params.kernel)
    scale = params.c * params.dt * w.nu * w.n_neighbors * line.dx
    re_v = w.components.real
    alpha_jj = 1.0 + scale * float(np.sum(re_v))
    return alpha_jj, {k: -scale * float(v) for k, v in zip(nbrs, re_v)}


def alpha_update(line: ParticleLine, j: int, params: AdvectionParams, neighbors=None) -> float:
    alpha_jj, off = alpha_amplitudes(line, j, params, neighbors)
    return alpha_jj * float(line.u[j]) + sum(a * float(line.u[k]) for k, a in off.items())


def two_particle_coin_params(dx: float, params: AdvectionParams) -> CoinParams:
    """Coin amplitudes for two particles a distance ``dx`` apart."""
    line = ParticleLine.uniform([0.0, 0.0], dx)
    alpha00, _ = alpha_amplitudes(line, 0, params)
    return CoinParams.from_alpha00(alpha00)


def coin_blocks(alpha00: float) -> tuple[np.ndarray, np.ndarray]:
    off = 1.0 - alpha00
    h0 = np.array([[alpha00, off], [off, -alpha00]])
    h1 = np.array([[-alpha00, off], [off, alpha00]])
    return h0, h1


def coin_operator_2q(cp: CoinParams) -> Operator:
    h0, h1 = coin_blocks(cp.alpha00)
    m = np.zeros((4, 4))
    m[:2, :2] = h0
    m[2:, 2:] = h1
    return Operator(cp.normalizer * m, name="coin")


def coin_operator_3q(cp: CoinParams) -> Operator:
    """Coin on the first and third of three qubits; the middle qubit is idle."""
    h0, h1 = coin_blocks(cp.alpha00)
    eye = np.eye(2)
    m = np.zeros((8, 8))
    m[:4, :4] = np.kron(eye, h0)
    m[4:, 4:] = np.kron(eye, h1)
    return Operator(cp.normalizer * m, name="coin")


def shift_operator_3q() -> Operator:
    """Shift exchanging the first and third of three qubits."""
    perm = [0, 4, 2, 6, 1, 5, 3, 7]
    return Operator(np.eye(8)[perm], name="S")


def embedded_coin(cp: CoinParams, velocity: int, neighbor: int, n_qubits: int) -> Operator:
    return embed(coin_operator_2q(cp), (velocity, neighbor), n_qubits)

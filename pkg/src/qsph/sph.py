"""Classical Eulerian SPH solver for 1-D linear advection.

Particles sit at fixed, uniformly spaced positions and carry an advected
quantity ``u``. One explicit step updates

    u_j <- u_j - c*dt * sum_k (u_k - u_j) * dx * grad_w(j, k)

over the neighbors ``k`` inside the kernel support.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

SPACING_TOL = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    h: float
    kind: str = "triangular"

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"smoothing length must be positive, got {self.h}")
        if self.kind != "triangular":
            raise ValueError(f"unsupported kernel {self.kind!r}")


@dataclass(frozen=True)
class ParticleLine:
    positions: np.ndarray
    u: np.ndarray
    dx: float = field(init=False)

    def __post_init__(self):
        x = np.array(self.positions, dtype=float)
        u = np.array(self.u, dtype=float)
        if x.ndim != 1 or x.shape != u.shape:
            raise ValueError("positions and u must be 1-D arrays of equal length")
        if x.size < 2:
            raise ValueError("need at least two particles")
        if not np.all(np.isfinite(u)):
            raise ValueError("u must be finite")
        gaps = np.diff(x)
        if np.any(gaps <= 0):
            raise ValueError("positions must be strictly increasing")
        dx = float(gaps[0])
        if np.max(np.abs(gaps - dx)) > SPACING_TOL:
            raise ValueError("particle spacing must be uniform")
        x.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "dx", dx)

    @classmethod
    def uniform(cls, u, dx: float, x0: float = 0.0) -> ParticleLine:
        u = np.asarray(u, dtype=float)
        return cls(x0 + dx * np.arange(u.size), u)

    def __len__(self):
        return self.u.size

    def with_u(self, u) -> ParticleLine:
        return replace(self, u=u)


@dataclass(frozen=True)
class AdvectionParams:
    c: float
    kernel: KernelSpec
    dt: float = 1.0

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("advection speed must be non-negative")
        if not self.dt > 0:
            raise ValueError("timestep must be positive")

    @classmethod
    def make(cls, c: float, h: float, dt: float = 1.0) -> AdvectionParams:
        return cls(c=c, kernel=KernelSpec(h), dt=dt)


def _check_h(h):
    if not h > 0:
        raise ValueError(f"smoothing length must be positive, got {h}")


def kernel_w(r: float, h: float) -> float:
    """Triangular kernel ``1/h - |r|/h**2`` on ``|r| < h``."""
    _check_h(h)
    r = abs(r)
    return 1.0 / h - r / h**2 if r < h else 0.0


def kernel_dw(r: float, h: float) -> float:
    """Derivative of the triangular kernel; zero at ``r == 0`` and outside support."""
    _check_h(h)
    if r == 0 or abs(r) >= h:
        return 0.0
    return -float(np.sign(r)) / h**2


def grad_w(j: int, k: int, line: ParticleLine, kernel: KernelSpec) -> float:
    """Kernel gradient coupling particle ``j`` to neighbor ``k``.

    The kernel is a function of the separation distance ``|x_k - x_j|``, so
    the derivative is taken along that distance. Inside the support this is
    ``-1/h**2`` regardless of which side the neighbor is on, and the coupling
    is symmetric in ``j`` and ``k``.
    """
    if j == k:
        raise ValueError("grad_w needs two distinct particles")
    x = line.positions
    return kernel_dw(abs(x[k] - x[j]), kernel.h)


def gradient_matrix(line: ParticleLine, kernel: KernelSpec) -> np.ndarray:
    """``G[j, k] = grad_w(j, k)`` with a zero diagonal."""
    sep = np.abs(line.positions[None, :] - line.positions[:, None])
    g = np.where((sep > 0) & (sep < kernel.h), -1.0 / kernel.h**2, 0.0)
    return g


def neighbors_in_support(line: ParticleLine, j: int, kernel: KernelSpec) -> list[int]:
    sep = np.abs(line.positions - line.positions[j])
    return [k for k in range(len(line)) if k != j and sep[k] < kernel.h]


def classical_step(line: ParticleLine, params: AdvectionParams) -> ParticleLine:
    u = line.u
    g = gradient_matrix(line, params.kernel)
    diff = u[None, :] - u[:, None]
    flux = np.sum(diff * line.dx * g, axis=1)
    return line.with_u(u - params.c * params.dt * flux)


def classical_evolve(line: ParticleLine, params: AdvectionParams, T: int) -> list[ParticleLine]:
    if T < 1:
        raise ValueError("T must be >= 1")
    out = [line]
    for _ in range(T):
        out.append(classical_step(out[-1], params))
    return out


def cfl_max_c(dx: float, dt: float) -> float:
    return dx / dt


def crossover_c(h: float, dx: float, dt: float = 1.0) -> float | None:
    """Advection speed at which two particles meet at their mean after one step."""
    if dx >= h:
        return None
    return h**2 / (2 * dt * dx)


def crossover_dx(h: float, c: float, dt: float = 1.0) -> float | None:
    """Particle spacing at which two particles meet at their mean after one step."""
    dx = h**2 / (2 * c * dt)
    return dx if dx < h else None

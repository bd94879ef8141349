"""Two-particle QSPH circuit over one to three timesteps.

Qubit 0 is the velocity register; qubit ``t`` (1-based) is the neighbor
register added for timestep ``t``. Each timestep puts a fresh neighbor in
``|+>``, entangles it with the velocity qubit, swaps neighbor information
with the shift and applies the reversible coin. The solutions are read off
the final statevector by fixed linear combinations of its amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .encoding import CoinParams, coin_operator_2q, two_particle_coin_params
from .sph import AdvectionParams
from .statevector import (
    Operator,
    StateVector,
    apply_operator,
    cnot,
    hadamard,
    ry,
    two_particle_shift,
    zero_state,
)

MAX_T = 3
VELOCITY = 0

# Signed amplitude weights (index, weight) reading u0(T) and u1(T), before
# division by the plan scale C * N**T / 2**(T/2). Generated by
# derive_extraction_weights() and checked against the classical solver.
_HALF, _QUARTER = 0.5, 0.25
EXTRACTION_WEIGHTS = {
    1: (
        ((0, 1.0),),
        ((3, 1.0),),
    ),
    2: (
        ((0, _HALF), (4, -_HALF), (2, _HALF), (6, _HALF)),
        ((7, _HALF), (3, -_HALF), (1, _HALF), (5, _HALF)),
    ),
    3: (
        tuple(zip(range(16), _QUARTER * np.array([1, 1, 1, 1, 1, -1, 1, -1, -1, -1, 1, 1, -1, 1, 1, -1]))),
        tuple(zip(range(16), _QUARTER * np.array([-1, 1, 1, -1, 1, 1, -1, -1, -1, 1, -1, 1, 1, 1, 1, 1]))),
    ),
}


@dataclass(frozen=True)
class Gate:
    name: str
    op: Operator
    targets: tuple[int, ...]
    timestep: int = 0


@dataclass(frozen=True)
class ExtractionPlan:
    T: int
    u0_terms: tuple[tuple[int, float], ...]
    u1_terms: tuple[tuple[int, float], ...]
    scale: float

    def positive_indices(self) -> list[int]:
        return sorted({i for i, w in self.u0_terms + self.u1_terms if w > 0})


@dataclass(frozen=True)
class QsphCircuit:
    T: int
    u0: float
    u1: float
    velocity_norm: float
    coin: CoinParams
    gates: tuple[Gate, ...]

    @property
    def n_qubits(self) -> int:
        return 1 + self.T

    @property
    def plan(self) -> ExtractionPlan:
        u0_terms, u1_terms = EXTRACTION_WEIGHTS[self.T]
        scale = self.velocity_norm * self.coin.normalizer**self.T / np.sqrt(2.0) ** self.T
        return ExtractionPlan(self.T, u0_terms, u1_terms, scale)


def encoding_rotation(u0: float, u1: float, from_plus: bool = False) -> Operator:
    """Single-qubit rotation taking ``|0>`` (or ``|+>``) to ``[u0, u1]/|u|``."""
    theta = 2.0 * np.arctan2(u1, u0)
    if from_plus:
        theta -= np.pi / 2
    return ry(theta)


def encode_velocity(u0: float, u1: float) -> tuple[StateVector, float]:
    """Amplitude-encode ``(u0, u1)``; returns the state and its normalizer C."""
    sq = u0 * u0 + u1 * u1
    if sq == 0:
        raise ValueError("cannot encode the zero vector")
    state = apply_operator(zero_state(1), encoding_rotation(u0, u1), [0])
    return state, sq**-0.5


def build_circuit(
    u0: float,
    u1: float,
    dx: float,
    params: AdvectionParams,
    T: int = 1,
    coin: CoinParams | None = None,
) -> QsphCircuit:
    """Gate sequence for ``T`` timesteps of the two-particle system.

    ``coin`` overrides the amplitudes derived from ``params``; it exists for
    negative controls.
    """
    if T not in range(1, MAX_T + 1):
        raise ValueError(f"T must be between 1 and {MAX_T}, got {T}")
    if u0 == 0 and u1 == 0:
        raise ValueError("initial condition must be nonzero")
    if coin is None:
        coin = two_particle_coin_params(dx, params)
    coin_op = coin_operator_2q(coin)
    gates = [
        Gate("hadamard", hadamard(), (VELOCITY,)),
        Gate("encode", encoding_rotation(u0, u1, from_plus=True), (VELOCITY,)),
    ]
    for t in range(1, T + 1):
        pair = (VELOCITY, t)
        gates += [
            Gate("hadamard", hadamard(), (t,), t),
            # neighbor is in |+>, so the CNOT leaves the product state intact
            Gate("entangle", cnot(), pair, t),
            Gate("shift", two_particle_shift(), pair, t),
            Gate("coin", coin_op, pair, t),
        ]
    return QsphCircuit(T, float(u0), float(u1), (u0 * u0 + u1 * u1) ** -0.5, coin, tuple(gates))


def iter_states(circuit: QsphCircuit):
    """Yield ``(gate, state)`` after each gate, starting from the ground state."""
    state = zero_state(circuit.n_qubits)
    yield None, state
    for gate in circuit.gates:
        state = apply_operator(state, gate.op, gate.targets)
        yield gate, state


def run(circuit: QsphCircuit) -> StateVector:
    for _, state in iter_states(circuit):
        pass
    return state


def _check_final(final: StateVector, circuit: QsphCircuit):
    if final.n_qubits != circuit.n_qubits:
        raise ValueError(
            f"statevector has {final.n_qubits} qubits, circuit with T={circuit.T} needs {circuit.n_qubits}"
        )


def extract_solutions(final: StateVector, circuit: QsphCircuit) -> tuple[float, float]:
    _check_final(final, circuit)
    plan = circuit.plan
    amps = final.amps.real
    u0 = sum(w * amps[i] for i, w in plan.u0_terms) / plan.scale
    u1 = sum(w * amps[i] for i, w in plan.u1_terms) / plan.scale
    return float(u0), float(u1)


def success_probability(final: StateVector, circuit: QsphCircuit) -> float:
    """Weight on the amplitudes read with a positive coefficient.

    A diagnostic of how much of the state the junk terms absorb.
    """
    _check_final(final, circuit)
    idx = circuit.plan.positive_indices()
    return float(np.sum(np.abs(final.amps[idx]) ** 2))


def simulate(u0, u1, dx, params, T=1, coin=None) -> tuple[float, float]:
    circuit = build_circuit(u0, u1, dx, params, T, coin)
    return extract_solutions(run(circuit), circuit)


def derive_extraction_weights(T: int):
    """Exact extraction weights for ``T`` timesteps.

    After a timestep, for every basis label ``(v, n)`` of the previous state
    both ``alpha00 * phi(v, n)`` and ``(1 - alpha00) * phi(v, n)`` are half-sums
    or half-differences of two new amplitudes (the coin is controlled on the
    velocity qubit). Pushing the previous readout weights through these
    identities yields the next ones.
    """
    half = Fraction(1, 2)
    w0, w1 = {0: Fraction(1)}, {1: Fraction(1)}
    for t in range(T):
        def idx(v, n, m):
            return (v << (t + 1)) | (n << 1) | m

        def a_part(v, n):
            m = v
            sign = 1 if v == 0 else -1
            return {idx(0, n, m): sign * half, idx(1, n, m): -sign * half}

        def b_part(v, n):
            m = 1 - v
            return {idx(0, n, m): half, idx(1, n, m): half}

        def push(wa, wb):
            out = {}
            for weights, part in ((wa, a_part), (wb, b_part)):
                for i, w in weights.items():
                    v, n = i >> t, i & ((1 << t) - 1)
                    for k, c in part(v, n).items():
                        out[k] = out.get(k, 0) + w * c
            return {k: c for k, c in sorted(out.items()) if c}

        w0, w1 = push(w0, w1), push(w1, w0)
    return w0, w1

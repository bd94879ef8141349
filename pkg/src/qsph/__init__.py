"""Quantum SPH: a two-particle quantum-walk circuit for 1-D advection, checked
against a classical SPH solver."""

from .circuit import build_circuit, extract_solutions, run, simulate, success_probability
from .encoding import CoinParams, coin_operator_2q, coin_operator_3q
from .sph import AdvectionParams, KernelSpec, ParticleLine, classical_evolve, classical_step

__all__ = [
    "AdvectionParams",
    "CoinParams",
    "KernelSpec",
    "ParticleLine",
    "build_circuit",
    "classical_evolve",
    "classical_step",
    "coin_operator_2q",
    "coin_operator_3q",
    "extract_solutions",
    "run",
    "simulate",
    "success_probability",
]

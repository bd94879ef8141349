"""Parameter sweeps comparing the circuit against the classical solver."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields
from pathlib import Path

import numpy as np

from . import circuit as qc
from .config import ExperimentConfig
from .encoding import (
    CoinParams,
    alpha_update,
    build_kernel_state,
    coin_operator_2q,
    coin_operator_3q,
    embedded_coin,
    inner_product_update,
    shift_operator_3q,
    two_particle_coin_params,
)
from .sph import (
    AdvectionParams,
    KernelSpec,
    ParticleLine,
    classical_evolve,
    classical_step,
    crossover_c,
    crossover_dx,
    neighbors_in_support,
)
from .statevector import (
    Operator,
    StateVector,
    apply_operator,
    embed,
    hadamard,
    two_particle_shift,
)



@dataclass(frozen=True)
class SweepRow:
    experiment: str
    sweep: str
    value: float
    T: int
    c: float
    dx: float
    h: float
    u0_init: float
    u1_init: float
    quantum_u0: float
    quantum_u1: float
    classical_u0: float
    classical_u1: float
    abs_error: float
    crossover: float | None
    success_probability: float
    unstable: bool


CSV_COLUMNS = tuple(f.name for f in fields(SweepRow))


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(rows, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for row in rows:
                w.writerow([_fmt(v) for v in astuple(row)])
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc
    return path


def evaluate_point(experiment, sweep, value, u0, u1, c, dx, h, dt, T, crossover,
                   coin_perturbation=0.0) -> SweepRow:
    params = AdvectionParams.make(c, h, dt)
    coin = None
    if coin_perturbation:
        coin = CoinParams.from_alpha00(two_particle_coin_params(dx, params).alpha00 + coin_perturbation)
    circ = qc.build_circuit(u0, u1, dx, params, T, coin)
    final = qc.run(circ)
    q0, q1 = qc.extract_solutions(final, circ)
    cl = classical_evolve(ParticleLine.uniform([u0, u1], dx), params, T)[-1].u
    c0, c1 = float(cl[0]), float(cl[1])
    return SweepRow(
        experiment, sweep, float(value), T, float(c), float(dx), float(h),
        float(u0), float(u1), q0, q1, c0, c1,
        max(abs(q0 - c0), abs(q1 - c1)),
        crossover,
        qc.success_probability(final, circ),
        min(c0, c1) < 0,
    )


def _with_marker(values, marker):
    vals = [float(v) for v in values]
    if marker is not None and min(vals) <= marker <= max(vals) and marker not in vals:
        vals.append(marker)
    return sorted(vals)


def fig5_rows(config: ExperimentConfig) -> list[SweepRow]:
    cross = crossover_c(config.h, config.dx, config.dt)
    rows = []
    for T in config.T:
        for u0, u1 in config.initial_conditions:
            for c in _with_marker(config.c_sweep(), cross):
                rows.append(evaluate_point(config.experiment, "c", c, u0, u1, c, config.dx,
                                           config.h, config.dt, T, cross,
                                           config.coin_perturbation))
    return rows


def fig6_rows(config: ExperimentConfig) -> list[SweepRow]:
    rows = []
    for c in config.c_values:
        cross = crossover_dx(config.h, c, config.dt)
        for T in config.T:
            for u0, u1 in config.initial_conditions:
                for dx in _with_marker(config.dx_sweep(), cross):
                    rows.append(evaluate_point(config.experiment, "dx", dx, u0, u1, c, dx,
                                               config.h, config.dt, T, cross,
                                               config.coin_perturbation))
    return rows


def fig7_rows(config: ExperimentConfig) -> list[SweepRow]:
    return fig5_rows(config)


def compare_rows(config: ExperimentConfig) -> list[SweepRow]:
    rows = []
    dx_values = config.dx_values or (config.dx,)
    h_values = config.h_values or (config.h,)
    for T in config.T:
        for h in h_values:
            for dx in dx_values:
                cross = crossover_c(h, dx, config.dt)
                for u0, u1 in config.initial_conditions:
                    for c in config.c_sweep():
                        rows.append(evaluate_point("compare", "c", c, u0, u1, c, dx, h,
                                                   config.dt, T, cross,
                                                   config.coin_perturbation))
    return rows


def max_error_by_T(rows) -> dict[int, float]:
    out = {}
    for r in rows:
        out[r.T] = max(out.get(r.T, 0.0), r.abs_error)
    return dict(sorted(out.items()))


def run_fig5(config: ExperimentConfig) -> Path:
    return write_csv(fig5_rows(config), Path(config.output_dir) / "fig5.csv")


def run_fig6(config: ExperimentConfig) -> Path:
    return write_csv(fig6_rows(config), Path(config.output_dir) / "fig6.csv")


def run_fig7(config: ExperimentConfig) -> Path:
    return write_csv(fig7_rows(config), Path(config.output_dir) / "fig7.csv")


@dataclass(frozen=True)
class CompareReport:
    path: Path
    max_errors: dict[int, float]
    worst: dict[int, SweepRow]
    tol: float

    @property
    def ok(self) -> bool:
        return all(e <= self.tol for e in self.max_errors.values())

    def lines(self) -> list[str]:
        out = []
        for T, err in self.max_errors.items():
            status = "ok" if err <= self.tol else "FAIL"
            out.append(f"T={T}: max |quantum - classical| = {err:.3e}  [{status}, tol {self.tol:g}]")
            if err > self.tol:
                r = self.worst[T]
                out.append(
                    f"    worst at u0={r.u0_init:g} u1={r.u1_init:g} c={r.c:.6g} dx={r.dx:g} h={r.h:g}"
                )
        return out


def run_compare(config: ExperimentConfig) -> CompareReport:
    rows = compare_rows(config)
    path = write_csv(rows, Path(config.output_dir) / "compare.csv")
    worst = {}
    for r in rows:
        if r.T not in worst or r.abs_error > worst[r.T].abs_error:
            worst[r.T] = r
    return CompareReport(path, max_error_by_T(rows), worst, config.tol)


# -- randomized invariant suites ---------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tol: float
    cases: int


def _random_line(rng, m, h):
    dx = rng.uniform(0.05, 1.5) * h
    return ParticleLine.uniform(rng.uniform(0, 1, m), dx)


def check_encoding_equivalence(rng, n_cases=200, tol=1e-10) -> list[CheckResult]:
    dev_ip = dev_alpha = 0.0
    for _ in range(n_cases):
        m = int(rng.integers(2, 17))
        h = rng.uniform(0.5, 2.0)
        line = _random_line(rng, m, h)
        c = rng.uniform(0, line.dx)
        params = AdvectionParams.make(c, h)
        ref = classical_step(line, params).u
        for j in range(m):
            dev_ip = max(dev_ip, abs(inner_product_update(line, j, params) - ref[j]))
            dev_alpha = max(dev_alpha, abs(alpha_update(line, j, params) - ref[j]))
    return [
        CheckResult("inner-product update matches classical step", dev_ip <= tol, dev_ip, tol, n_cases),
        CheckResult("alpha update matches classical step", dev_alpha <= tol, dev_alpha, tol, n_cases),
    ]


def check_kernel_state_normalization(rng, n_cases=200, tol=1e-12) -> CheckResult:
    dev = 0.0
    for _ in range(n_cases):
        m = int(rng.integers(2, 17))
        h = rng.uniform(0.5, 2.0)
        line = _random_line(rng, m, h)
        kernel = KernelSpec(h)
        for j in range(m):
            nbrs = neighbors_in_support(line, j, kernel)
            if not nbrs:
                continue
            w = build_kernel_state(line, j, nbrs, kernel)
            n = w.n_neighbors
            dev = max(dev, np.max(np.abs(np.abs(w.components) ** 2 - 1.0 / n)))
            dev = max(dev, abs(np.linalg.norm(w.components) - 1.0))
    return CheckResult("kernel state modulus^2 = 1/N", dev <= tol, float(dev), tol, n_cases)


def _unitarity_deviation(op: Operator) -> float:
    m = op.matrix
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def check_gate_unitarity(rng, n_samples=1000, tol=1e-12) -> CheckResult:
    dev = max(_unitarity_deviation(hadamard()), _unitarity_deviation(two_particle_shift()),
              _unitarity_deviation(shift_operator_3q()))
    for a in rng.uniform(-2, 2, n_samples):
        cp = CoinParams.from_alpha00(a)
        for op in (coin_operator_2q(cp), coin_operator_3q(cp), embedded_coin(cp, 0, 2, 4)):
            dev = max(dev, _unitarity_deviation(op))
    return CheckResult("gates unitary", dev <= tol, dev, tol, n_samples)


def check_norm_preservation(rng, n_cases=100, tol=1e-12) -> CheckResult:
    dev = 0.0
    gates = [hadamard(), two_particle_shift()]
    for _ in range(n_cases):
        n = int(rng.integers(2, 7))
        amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        s = StateVector(amps / np.linalg.norm(amps))
        op = gates[int(rng.integers(len(gates)))] if rng.random() < 0.5 else \
            coin_operator_2q(CoinParams.from_alpha00(rng.uniform(-2, 2)))
        targets = rng.choice(n, size=op.n_qubits, replace=False)
        out = apply_operator(s, op, targets)
        dev = max(dev, abs(out.norm() - s.norm()))
    return CheckResult("norm preserved by apply_operator", dev <= tol, dev, tol, n_cases)


def check_circuit_norms(rng, n_cases=100, tol=1e-12) -> CheckResult:
    dev = 0.0
    for _ in range(n_cases):
        u0, u1 = rng.uniform(0, 1, 2)
        dx, h = rng.choice([0.2, 0.5]), rng.choice([1.2, 1.4])
        params = AdvectionParams.make(rng.uniform(1e-4, 2), h)
        circ = qc.build_circuit(u0, u1, dx, params, int(rng.integers(1, 4)))
        for _, state in qc.iter_states(circ):
            dev = max(dev, abs(state.norm() - 1.0))
    return CheckResult("statevector norm 1 after every gate", dev <= tol, dev, tol, n_cases)


def check_sum_conservation(rng, n_cases=100, tol=1e-10) -> CheckResult:
    dev = 0.0
    for _ in range(n_cases):
        u0, u1 = rng.uniform(0, 1, 2)
        dx, h = rng.choice([0.2, 0.5]), rng.choice([1.2, 1.4])
        params = AdvectionParams.make(rng.uniform(1e-4, 2), h)
        q0, q1 = qc.simulate(u0, u1, dx, params, int(rng.integers(1, 4)))
        dev = max(dev, abs(q0 + q1 - u0 - u1))
    return CheckResult("pipeline conserves u0 + u1", dev <= tol, dev, tol, n_cases)


def check_printed_matrices(rng, n_samples=100, tol=1e-14) -> CheckResult:
    dev = float(np.max(np.abs(shift_operator_3q().matrix - embed(two_particle_shift(), (0, 2), 3).matrix)))
    for a in rng.uniform(-2, 2, n_samples):
        cp = CoinParams.from_alpha00(a)
        diff = coin_operator_3q(cp).matrix - embedded_coin(cp, 0, 2, 3).matrix
        dev = max(dev, float(np.max(np.abs(diff))))
    return CheckResult("3-qubit shift/coin equal embedded 2-qubit gates", dev <= tol, dev, tol, n_samples)


def run_invariants(config: ExperimentConfig) -> tuple[Path, list[CheckResult]]:
    rng = np.random.default_rng(config.seed)
    results = [
        *check_encoding_equivalence(rng, config.n_cases),
        check_kernel_state_normalization(rng, config.n_cases),
        check_gate_unitarity(rng),
        check_norm_preservation(rng),
        check_circuit_norms(rng),
        check_sum_conservation(rng),
        check_printed_matrices(rng),
    ]
    path = Path(config.output_dir) / "invariants.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["check", "passed", "deviation", "tol", "cases"])
        for r in results:
            w.writerow([r.name, int(r.passed), _fmt(r.deviation), _fmt(r.tol), r.cases])
    return path, results

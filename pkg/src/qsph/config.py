"""Experiment configuration and its flat ``key = value`` file format.

Example::

    # fig5 overrides
    c_min = 1e-4
    c_max = 2
    c_points = 40
    initial_conditions = 1,0; 0.8,0.2
    emit_plots = true

Lists are comma separated; initial conditions are ``u0,u1`` pairs separated
by semicolons.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

EXPERIMENTS = ("fig5", "fig6", "fig7", "compare", "invariants")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    c_min: float = 1e-4
    c_max: float = 2.0
    c_points: int = 20
    c_values: tuple[float, ...] = ()
    dx: float = 0.5
    dx_min: float = 0.02
    dx_max: float = 1.6
    dx_points: int = 80
    dx_values: tuple[float, ...] = ()
    h: float = 1.2
    h_values: tuple[float, ...] = ()
    dt: float = 1.0
    T: tuple[int, ...] = (1,)
    initial_conditions: tuple[tuple[float, float], ...] = ()
    output_dir: str = "results"
    emit_plots: bool = False
    seed: int = 0
    tol: float = 1e-10
    coin_perturbation: float = 0.0
    n_cases: int = 200

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        for name in ("c_min", "c_max", "dx_min", "dx_max", "h", "dt", "tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.c_min > self.c_max or self.dx_min > self.dx_max:
            raise ConfigError("sweep minimum exceeds maximum")
        if self.c_points < 2 or self.dx_points < 2:
            raise ConfigError("sweeps need at least 2 points")
        if any(t not in (1, 2, 3) for t in self.T):
            raise ConfigError("T values must be in 1..3")
        for u0, u1 in self.initial_conditions:
            if u0 == 0 and u1 == 0:
                raise ConfigError("initial conditions must be nonzero")

    def c_sweep(self) -> np.ndarray:
        return np.logspace(np.log10(self.c_min), np.log10(self.c_max), self.c_points)

    def dx_sweep(self) -> np.ndarray:
        return np.linspace(self.dx_min, self.dx_max, self.dx_points)


FIG5_ICS = ((1.0, 0.0), (0.8, 0.2), (0.6, 0.4), (0.5, 0.5))
FIG6_ICS = ((0.2, 0.0), (0.0, 0.2), (0.5, 0.5), (0.8, 0.4))
COMPARE_ICS = ((1.0, 0.0), (0.8, 0.2), (0.6, 0.4), (0.5, 0.5), (0.8, 0.4), (0.2, 0.0), (0.0, 0.2))

_DEFAULTS = {
    "fig5": dict(dx=0.5, h=1.2, c_min=1e-4, c_max=2.0, T=(1,), initial_conditions=FIG5_ICS),
    "fig6": dict(h=1.4, c_values=(0.5, 1.0, 2.0), T=(1,), initial_conditions=FIG6_ICS),
    "fig7": dict(dx=0.2, h=1.2, c_min=1e-4, c_max=1.0, T=(1, 2, 3), initial_conditions=((0.8, 0.4),)),
    "compare": dict(
        c_min=1e-4,
        c_max=2.0,
        dx_values=(0.2, 0.5),
        h_values=(1.2, 1.4),
        T=(1, 2, 3),
        initial_conditions=COMPARE_ICS,
    ),
    "invariants": dict(),
}


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    return ExperimentConfig(experiment=experiment, **{**_DEFAULTS[experiment], **overrides})


def _parse_bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_pairs(text):
    pairs = []
    for chunk in filter(None, (p.strip() for p in text.split(";"))):
        vals = [float(v) for v in chunk.strip("()").split(",")]
        if len(vals) != 2:
            raise ValueError(f"expected a u0,u1 pair, got {chunk!r}")
        pairs.append((vals[0], vals[1]))
    return tuple(pairs)


def _parser_for(name):
    if name == "initial_conditions":
        return _parse_pairs
    if name == "T":
        return lambda s: tuple(int(v) for v in s.split(",") if v.strip())
    if name in ("c_values", "dx_values", "h_values"):
        return lambda s: tuple(float(v) for v in s.split(",") if v.strip())
    if name == "emit_plots":
        return _parse_bool
    if name in ("c_points", "dx_points", "seed", "n_cases"):
        return int
    if name in ("experiment", "output_dir"):
        return str
    return float


def parse_config_text(text: str, source: str = "<config>") -> dict:
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _parser_for(key)(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
    return out


def load_config(experiment: str, path=None, **overrides) -> ExperimentConfig:
    values = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values = parse_config_text(text, str(path))
        if values.pop("experiment", experiment) != experiment:
            raise ConfigError(f"{path}: config is for a different experiment")
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return default_config(experiment, **values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(config, **kw)

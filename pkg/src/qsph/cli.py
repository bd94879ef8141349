"""``qsph`` command line: figure sweeps, comparison report, invariant suites.

Exit codes: 0 success, 1 tolerance breach, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiments as ex
from .config import EXPERIMENTS, ConfigError, load_config
from .plotting import CsvFormatError, emit_plot, read_sweep_csv

EXIT_OK, EXIT_TOL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qsph", description="Quantum SPH two-particle experiments")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", type=Path, help="flat key = value config file")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--plots", action="store_true", help="also write SVG plots")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, help="max allowed |quantum - classical|")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        config = load_config(
            args.experiment,
            args.config,
            output_dir=str(args.out) if args.out else None,
            emit_plots=True if args.plots else None,
            seed=args.seed,
            tol=args.tol,
        )
    except ConfigError as exc:
        print(f"qsph: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.experiment == "compare":
            report = ex.run_compare(config)
            print(f"wrote {report.path}")
            for line in report.lines():
                print(line)
            if config.emit_plots:
                print(f"wrote {emit_plot(report.path, report.path.with_suffix('.svg'))}")
            return EXIT_OK if report.ok else EXIT_TOL
        if args.experiment == "invariants":
            path, results = ex.run_invariants(config)
            for r in results:
                status = "PASS" if r.passed else "FAIL"
                print(f"{status}  {r.name}: deviation {r.deviation:.3e} (tol {r.tol:g}, {r.cases} cases)")
            print(f"wrote {path}")
            return EXIT_OK if all(r.passed for r in results) else EXIT_TOL

        runner = {"fig5": ex.run_fig5, "fig6": ex.run_fig6, "fig7": ex.run_fig7}[args.experiment]
        path = runner(config)
        print(f"wrote {path}")
        worst = max(r["abs_error"] for r in read_sweep_csv(path))
        if config.emit_plots:
            print(f"wrote {emit_plot(path, path.with_suffix('.svg'))}")
        print(f"max |quantum - classical| = {worst:.3e} (tol {config.tol:g})")
        return EXIT_OK if worst <= config.tol else EXIT_TOL
    except (OSError, CsvFormatError) as exc:
        print(f"qsph: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""SVG rendering of sweep CSVs."""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

from .experiments import CSV_COLUMNS

_FLOATS = {"value", "c", "dx", "h", "u0_init", "u1_init", "quantum_u0", "quantum_u1",
           "classical_u0", "classical_u1", "abs_error", "success_probability"}


class CsvFormatError(ValueError):
    pass


def read_sweep_csv(path) -> list[dict]:
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise CsvFormatError(f"{path}:1: header does not match the sweep schema")
        for row in reader:
            lineno = reader.line_num
            if len(row) != len(header):
                raise CsvFormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            rec = dict(zip(header, row))
            try:
                for key in _FLOATS:
                    rec[key] = float(rec[key])
                rec["T"] = int(rec["T"])
                rec["crossover"] = float(rec["crossover"]) if rec["crossover"] else None
            except ValueError as exc:
                raise CsvFormatError(f"{path}:{lineno}: {exc}") from None
            rows.append(rec)
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return rows


def _panels(rows):
    """Group rows into panels: one per T for multi-step data, else one per c for dx sweeps."""
    ts = sorted({r["T"] for r in rows})
    if len(ts) > 1:
        key, label = "T", "T = {:g}"
    elif rows[0]["sweep"] == "dx":
        key, label = "c", "c = {:g}"
    else:
        key, label = "T", "T = {:g}"
    groups = defaultdict(list)
    for r in rows:
        groups[r[key]].append(r)
    return [(label.format(k), groups[k]) for k in sorted(groups)]


def emit_plot(csv_path, out_path) -> Path:
    rows = read_sweep_csv(csv_path)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    panels = _panels(rows)
    sweep = rows[0]["sweep"]
    fig, axes = plt.subplots(len(panels), 2, figsize=(10, 3.2 * len(panels)), squeeze=False)
    for (title, prow), ax_pair in zip(panels, axes):
        curves = defaultdict(list)
        for r in prow:
            curves[(r["u0_init"], r["u1_init"])].append(r)
        for which, ax in zip(("u0", "u1"), ax_pair):
            for (a, b), pts in curves.items():
                pts = sorted(pts, key=lambda r: r["value"])
                xs = [r["value"] for r in pts]
                ax.plot(xs, [r[f"quantum_{which}"] for r in pts], label=f"({a:g}, {b:g}) circuit")
                ax.plot(xs, [r[f"classical_{which}"] for r in pts], ":", color="k", lw=0.8)
            cross = prow[0]["crossover"]
            if cross is not None:
                ax.axvline(cross, color="gray", ls="--", lw=1)
            if sweep == "c":
                ax.set_xscale("log")
            ax.set_xlabel("c" if sweep == "c" else "dx")
            ax.set_ylabel(f"{which}({prow[0]['T']})")
            ax.set_title(title)
        ax_pair[0].legend(fontsize=7)
    fig.tight_layout()
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, format="svg")
    plt.close(fig)
    return out_path

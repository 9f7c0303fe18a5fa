"""Regenerate publication-style figures from the CLI's CSV sweep outputs.

Read-only over its inputs; rendering is deterministic given identical CSV
bytes.  Axis ranges follow the standard presentation: tau in [-1000, 1000] ns
with horizontal guides at 1.0 and 1.5 on the correlation panels, which makes
the classicality floor and the incoherent-sum plateau visually checkable.

Figures
-------
fig2  2x2 grid: R_cd(tau) (top row) and g2_C(tau, 0) (bottom row) for the
      two alpha values; solid DD, dashed AD.
fig3  g2_C vs truncation order P for three conditions: (a) tau=0 DD,
      (b) tau=0 AD, (c) tau=500 ns.
fig4  2x2 heatmaps of g2_C over (tau, tauc), one per (alpha, basis), with
      the tauc=0 slice overdrawn.
"""

from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict


class FigureInputError(ValueError):
    """Raised when an input CSV is missing, empty, or has the wrong schema."""


REQUIRED_COLUMNS = {
    "rcd": {"tau_ns", "alpha", "basis", "rcd", "status"},
    "g2": {"tau_ns", "tauc_ns", "alpha", "basis", "g2", "status"},
    "converge": {"p", "tau_ns", "alpha", "basis", "g2", "status"},
}


def read_rows(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise FigureInputError(f"{path}: empty CSV (no header row)")
        rows = list(reader)
    if not rows:
        raise FigureInputError(f"{path}: CSV has a header but no data rows")
    return rows


def classify(path: str, rows: list[dict]) -> str:
    """Which sweep produced this CSV, judged by its columns."""
    cols = set(rows[0].keys())
    for kind in ("converge", "rcd", "g2"):
        if REQUIRED_COLUMNS[kind] <= cols:
            return kind
    for kind, req in REQUIRED_COLUMNS.items():
        missing = req - cols
        if len(missing) <= 2:
            raise FigureInputError(
                f"{path}: missing required column(s) {sorted(missing)} for a {kind} CSV"
            )
    raise FigureInputError(f"{path}: unrecognized schema (columns {sorted(cols)})")


def _ok(rows: list[dict]) -> list[dict]:
    return [r for r in rows if r["status"] == "ok"]


def _series(rows: list[dict], xcol: str, ycol: str) -> tuple[list[float], list[float]]:
    pts = sorted((float(r[xcol]), float(r[ycol])) for r in _ok(rows))
    return [p[0] for p in pts], [p[1] for p in pts]


def _group(rows: list[dict], *cols: str) -> dict[tuple, list[dict]]:
    out: dict[tuple, list[dict]] = defaultdict(list)
    for r in rows:
        out[tuple(r[c] for c in cols)].append(r)
    return out


_STYLE = {"dd": dict(linestyle="-", color="tab:blue", label="DD"),
          "ad": dict(linestyle="--", color="tab:red", label="AD")}


def render_fig2(inputs: list[tuple[str, str, list[dict]]], out: str) -> None:
    import matplotlib.pyplot as plt

    rcd_rows = [r for _, kind, rows in inputs if kind == "rcd" for r in rows]
    g2_rows = [r for _, kind, rows in inputs if kind == "g2" for r in rows]
    if not rcd_rows or not g2_rows:
        raise FigureInputError("fig2 needs at least one rcd CSV and one g2 CSV")
    alphas = sorted({float(r["alpha"]) for r in rcd_rows + g2_rows})
    fig, axes = plt.subplots(2, len(alphas), figsize=(5 * len(alphas), 7), squeeze=False)
    for col, alpha in enumerate(alphas):
        ax_r, ax_g = axes[0][col], axes[1][col]
        for (basis,), rows in sorted(_group(rcd_rows, "basis").items()):
            rows = [r for r in rows if float(r["alpha"]) == alpha]
            if rows:
                ax_r.plot(*_series(rows, "tau_ns", "rcd"), **_STYLE[basis])
        for (basis,), rows in sorted(_group(g2_rows, "basis").items()):
            rows = [r for r in rows if float(r["alpha"]) == alpha]
            if rows:
                ax_g.plot(*_series(rows, "tau_ns", "g2"), **_STYLE[basis])
        ax_r.set_title(f"alpha = {alpha:g}")
        ax_r.set_ylabel("$R_{cd}(\\tau)$")
        ax_g.set_ylabel("$g^{(2)}_C(\\tau,0)$")
        ax_g.set_xlabel("$\\tau$ (ns)")
        for ax in (ax_r, ax_g):
            ax.axhline(1.0, color="0.6", linewidth=0.8)
            ax.axhline(1.5, color="0.6", linewidth=0.8)
            ax.set_xlim(-1000, 1000)
            ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def render_fig3(inputs: list[tuple[str, str, list[dict]]], out: str) -> None:
    import matplotlib.pyplot as plt

    rows = [r for _, kind, rs in inputs if kind == "converge" for r in rs]
    if not rows:
        raise FigureInputError("fig3 needs converge CSVs")
    # Three panels: tau=0 DD, tau=0 AD, tau!=0 (any basis).
    panels = {"a": [], "b": [], "c": []}
    for r in rows:
        if abs(float(r["tau_ns"])) < 1e-12:
            panels["a" if r["basis"] == "dd" else "b"].append(r)
        else:
            panels["c"].append(r)
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))
    titles = {"a": "$\\tau=0$, DD", "b": "$\\tau=0$, AD", "c": "$\\tau>\\tau_{coh}$"}
    for ax, key in zip(axes, "abc"):
        for (alpha, basis), rs in sorted(_group(panels[key], "alpha", "basis").items()):
            xs, ys = _series(rs, "p", "g2")
            ax.plot(xs, ys, marker="o", markersize=3,
                    linestyle=_STYLE[basis]["linestyle"],
                    label=f"$\\alpha$={float(alpha):g} {basis.upper()}")
        ax.axhline(1.0, color="0.6", linewidth=0.8)
        ax.axhline(1.5, color="0.6", linewidth=0.8)
        ax.set_title(titles[key])
        ax.set_xlabel("truncation order $P$")
        ax.set_ylabel("$g^{(2)}_C$")
        if panels[key]:
            ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def render_fig4(inputs: list[tuple[str, str, list[dict]]], out: str) -> None:
    import matplotlib.pyplot as plt
    import numpy as np

    maps = [(p, rows) for p, kind, rows in inputs if kind == "g2"]
    if not maps:
        raise FigureInputError("fig4 needs map CSVs (g2 schema with a tauc grid)")
    panels = []
    for path, rows in maps:
        for (alpha, basis), rs in sorted(_group(rows, "alpha", "basis").items()):
            panels.append((float(alpha), basis, rs))
    n = len(panels)
    ncols = 2 if n > 1 else 1
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.5 * ncols, 4 * nrows), squeeze=False)
    for idx, (alpha, basis, rs) in enumerate(panels):
        ax = axes[idx // ncols][idx % ncols]
        ok = _ok(rs)
        taus = np.array(sorted({float(r["tau_ns"]) for r in ok}))
        taucs = np.array(sorted({float(r["tauc_ns"]) for r in ok}))
        grid = np.full((len(taucs), len(taus)), np.nan)
        ti = {t: i for i, t in enumerate(taus)}
        ci = {t: i for i, t in enumerate(taucs)}
        for r in ok:
            grid[ci[float(r["tauc_ns"])], ti[float(r["tau_ns"])]] = float(r["g2"])
        im = ax.pcolormesh(taus, taucs, grid, shading="nearest")
        fig.colorbar(im, ax=ax, label="$g^{(2)}_C$")
        # overdraw the tauc = 0 slice on a twin value axis
        if 0.0 in ci:
            ax2 = ax.twinx()
            ax2.plot(taus, grid[ci[0.0]], color="black", linewidth=1.2)
            ax2.set_ylabel("$g^{(2)}_C(\\tau, 0)$")
        ax.set_title(f"$\\alpha$={alpha:g}, {basis.upper()}")
        ax.set_xlabel("$\\tau$ (ns)")
        ax.set_ylabel("$\\tau_c$ (ns)")
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def render(figure: str, in_paths: list[str], out: str) -> None:
    inputs = []
    for p in in_paths:
        rows = read_rows(p)
        inputs.append((p, classify(p, rows), rows))
    if figure == "fig2":
        render_fig2(inputs, out)
    elif figure == "fig3":
        render_fig3(inputs, out)
    elif figure == "fig4":
        render_fig4(inputs, out)
    else:
        raise FigureInputError(f"unknown figure {figure!r}")


def main() -> None:
    parser = argparse.ArgumentParser(
        prog="heraldg2-figgen", description="Render figures from heraldg2 CSV sweeps"
    )
    parser.add_argument("--figure", choices=["fig2", "fig3", "fig4"], required=True)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="input CSV paths")
    parser.add_argument("--out", required=True, help="output image path (.png or .svg)")
    args = parser.parse_args()
    try:
        import matplotlib

        matplotlib.use("Agg")
        render(args.figure, args.inputs, args.out)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()

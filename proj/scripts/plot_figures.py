#!/usr/bin/env python3
"""Plot the CSV artifacts written by the nsk tool.

Usage: plot_figures.py RUN_DIR [--out FIG_DIR]

RUN_DIR is searched for phase_diagram.csv, min_curve.csv, diagnostics.csv,
ensemble_summary.csv and snapshot_*.csv. Each file found yields one PNG.
"""

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def read_columns(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k: np.array([float(r[k]) for r in rows]) for k in rows[0]}


def phase_diagram(path, out):
    d = read_columns(path)
    ks, ss = np.unique(d["k"]), np.unique(d["s"])
    shape = (ks.size, ss.size)
    fig, axes = plt.subplots(1, 2, figsize=(9, 4), sharey=True)
    for ax, key in zip(axes, ("improves_paper", "improves_direct")):
        grid = d[key].reshape(shape).T
        ax.pcolormesh(ks, ss, grid, shading="nearest", cmap="Greys", vmin=0, vmax=2)
        ax.plot(ks, ks, "k--", lw=1, label=r"$\kappa = \xi^2$")
        ax.set_xlabel(r"$\kappa/\nu^2$")
        ax.set_title(key)
        ax.set_ylim(ss[0], ss[-1])
    axes[0].set_ylabel(r"$\xi^2/\nu^2$")
    axes[0].legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(out / "phase_diagram.png", dpi=150)


def min_curve(path, out):
    d = read_columns(path)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(d["xi_over_nu"], d["std_product"])
    ax.axhline(d["std_product"][0], color="grey", ls=":", lw=1)
    ax.set_xlabel(r"$\xi/\nu$")
    ax.set_ylabel(r"$\min\,\sigma_x\sigma_p$")
    fig.tight_layout()
    fig.savefig(out / "min_curve.png", dpi=150)


def diagnostics(path, out):
    d = read_columns(path)
    fig, axes = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
    axes[0].plot(d["t"], d["std_product"], label=r"$\sigma_x\sigma_p$")
    axes[0].plot(d["t"], np.sqrt(np.maximum(d["rhs"], 0.0)), "--", label="bound")
    axes[0].legend()
    axes[1].plot(d["t"], d["margin"])
    axes[1].set_ylabel("margin")
    axes[1].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(out / "diagnostics.png", dpi=150)


def snapshots(paths, out):
    fig, axes = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
    step = max(1, len(paths) // 6)
    for p in paths[::step]:
        d = read_columns(p)
        axes[0].plot(d["x"], d["rho"], label=p.stem)
        axes[1].plot(d["x"], d["v"])
    axes[0].set_ylabel(r"$\rho$")
    axes[0].legend(fontsize="small")
    axes[1].set_ylabel("v")
    axes[1].set_xlabel("x")
    fig.tight_layout()
    fig.savefig(out / "snapshots.png", dpi=150)


def ensemble(path, out):
    d = read_columns(path)
    fig, axes = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
    axes[0].plot(d["t"], d["variance"], "o-")
    axes[0].set_ylabel("sample variance")
    axes[1].semilogy(d["t"], np.maximum(d["hist_l1_error"], 1e-16), "o-")
    axes[1].set_ylabel("histogram L1 error")
    axes[1].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(out / "ensemble.png", dpi=150)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("run_dir", type=Path)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    out = args.out or args.run_dir
    out.mkdir(parents=True, exist_ok=True)

    single = {
        "phase_diagram.csv": phase_diagram,
        "min_curve.csv": min_curve,
        "diagnostics.csv": diagnostics,
        "ensemble_summary.csv": ensemble,
    }
    made = 0
    for name, fn in single.items():
        path = args.run_dir / name
        if path.exists():
            fn(path, out)
            made += 1
    snaps = sorted(args.run_dir.glob("snapshot_*.csv"))
    if snaps:
        snapshots(snaps, out)
        made += 1
    if made == 0:
        raise SystemExit(f"no known CSV files in {args.run_dir}")
    print(f"wrote {made} figure(s) to {out}")


if __name__ == "__main__":
    main()

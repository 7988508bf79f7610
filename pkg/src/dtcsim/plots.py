"""Static vector-graphics plots from run output files."""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def _read_trace(path: Path):
    return np.genfromtxt(path, delimiter=",", names=True,
                         dtype=None, encoding="utf-8")


def plot_signature(trace_path: Path, out_path: Path) -> Path:
    """Signature vs time with stroke boundaries marked."""
    data = _read_trace(trace_path)
    fig, ax = plt.subplots(figsize=(9, 3.2))
    ax.plot(data["time"], data["signature"], lw=0.9)
    switches = data["time"][:-1][np.asarray(data["stroke"][:-1]) != np.asarray(data["stroke"][1:])]
    for t in switches:
        ax.axvline(t, color="0.85", lw=0.4, zorder=0)
    ax.set_xlabel("time")
    ax.set_ylabel(r"$\langle S_x \rangle$")
    ax.set_title(trace_path.stem)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def plot_thermo(trace_path: Path, work_path: Path | None, out_path: Path) -> Path:
    """Panel of energy, heat rate, switch work, and entropies."""
    data = _read_trace(trace_path)
    fig, axes = plt.subplots(4, 1, figsize=(9, 9), sharex=True)
    axes[0].plot(data["time"], data["energy"])
    axes[0].set_ylabel("U")
    axes[1].plot(data["time"], data["heat_rate"])
    axes[1].set_ylabel(r"$\dot{Q}$")
    if work_path is not None and Path(work_path).exists():
        work = np.genfromtxt(work_path, delimiter=",", names=True)
        if work.size:
            times = np.atleast_1d(work["time"])
            values = np.atleast_1d(work["work"])
            axes[2].stem(times, values, basefmt=" ")
    axes[2].set_ylabel("W (switches)")
    axes[3].plot(data["time"], data["entropy"], label="S")
    axes[3].plot(data["time"], data["half_chain_entropy"], label="S half chain")
    axes[3].plot(data["time"], data["entropy_production"], label=r"$\sigma$")
    axes[3].legend(loc="best", fontsize=8)
    axes[3].set_ylabel("entropy")
    axes[3].set_xlabel("time")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def plot_er_heatmap(er_paths: list[Path], betas: list[float], out_path: Path) -> Path:
    """Relative-difference map over (period, inverse temperature)."""
    order = np.argsort(betas)
    rows, kept_betas = [], []
    for i in order:
        data = np.genfromtxt(er_paths[i], delimiter=",", names=True)
        rows.append(np.atleast_1d(data["relative_difference"]))
        kept_betas.append(betas[i])
    n = min(len(r) for r in rows)
    grid = np.vstack([r[:n] for r in rows])
    fig, ax = plt.subplots(figsize=(8, 4))
    mesh = ax.pcolormesh(np.arange(n), kept_betas, grid, shading="nearest")
    ax.set_yscale("log")
    ax.set_xlabel("period")
    ax.set_ylabel(r"$\beta$")
    fig.colorbar(mesh, ax=ax, label=r"$E_r$")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def plot_trajectory_stats(stats_path: Path, out_path: Path) -> Path:
    """Mean M, dw, A against beta (one curve per chain size)."""
    records = [json.loads(line) for line in Path(stats_path).read_text().splitlines()
               if line.strip()]
    records = [r for r in records if r.get("protocol") == "trajectories"]
    if not records:
        raise ValueError(f"no trajectory records in {stats_path}")
    grouped = defaultdict(list)
    for r in records:
        grouped[(r["N"], r["beta"])].append(r)
    sizes = sorted({key[0] for key in grouped})
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.4))
    for n in sizes:
        betas = sorted(b for (size, b) in grouped if size == n)
        for ax, stat in zip(axes, ("M", "dw", "A")):
            means = [np.mean([abs(r[stat]) if stat == "M" else r[stat]
                              for r in grouped[(n, b)]]) for b in betas]
            ax.plot(betas, means, "o-", label=f"N={n}")
    for ax, label in zip(axes, (r"$\overline{|M|}$", r"$\overline{dw}$",
                                r"$\overline{A}$")):
        ax.set_xscale("log")
        ax.set_xlabel(r"$\beta$")
        ax.set_ylabel(label)
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def emit_plots(run_dir: str | Path, out_dir: str | Path | None = None) -> list[Path]:
    """Render every plot the files in ``run_dir`` support; returns written paths."""
    run_dir = Path(run_dir)
    out_dir = Path(out_dir) if out_dir else run_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    traces = sorted(run_dir.glob("trace_*.csv"))
    for trace in traces:
        stem = trace.stem.removeprefix("trace_")
        written.append(plot_signature(trace, out_dir / f"signature_{stem}.pdf"))
        work = run_dir / f"work_{stem}.csv"
        written.append(plot_thermo(trace, work if work.exists() else None,
                                   out_dir / f"thermo_{stem}.pdf"))

    er_files = sorted(run_dir.glob("er_*.csv"))
    if len(er_files) > 1:
        betas = []
        for path in er_files:
            token = [p for p in path.stem.split("_") if p.startswith("b")]
            betas.append(float(token[0][1:]) if token else np.nan)
        if np.isfinite(betas).all():
            written.append(plot_er_heatmap(er_files, betas,
                                           out_dir / "er_heatmap.pdf"))

    stats = run_dir / "stats.jsonl"
    if stats.exists():
        try:
            written.append(plot_trajectory_stats(stats, out_dir / "trajectory_stats.pdf"))
        except ValueError:
            pass
    return written

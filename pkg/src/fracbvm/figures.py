"""Headless matplotlib renderers for the CLI's benchmark and spectra output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["render_benchmark_figure", "render_spectra_figure"]

_METHODS = ("I", "S", "S2", "S2mod")


def render_benchmark_figure(rows, path: str, title: str = "") -> str:
    """Iteration counts (log bars) and wall times per (N, s) cell."""
    cells = sorted({(r.N, r.s) for r in rows})
    by = {(r.N, r.s, r.label): r for r in rows}
    x = np.arange(len(cells))
    width = 0.2
    fig, (ax_it, ax_t) = plt.subplots(2, 1, figsize=(10, 7), sharex=True)
    for k, label in enumerate(_METHODS):
        its = [by[c + (label,)].iterations if c + (label,) in by else np.nan
               for c in cells]
        ts = [by[c + (label,)].wall_time_seconds if c + (label,) in by
              else np.nan for c in cells]
        off = (k - 1.5) * width
        ax_it.bar(x + off, its, width, label=label)
        ax_t.bar(x + off, ts, width, label=label)
    ax_it.set_yscale("log")
    ax_it.set_ylabel("GMRES(20) iterations")
    ax_it.legend(ncol=4, fontsize=8)
    ax_t.set_yscale("log")
    ax_t.set_ylabel("wall time [s]")
    ax_t.set_xticks(x)
    ax_t.set_xticklabels([f"N={N}\ns={s}" for N, s in cells], fontsize=8)
    if title:
        ax_it.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_spectra_figure(spectra: dict, path: str, title: str = "") -> str:
    """2x2 scatter of the four operator spectra in the complex plane."""
    order = [k for k in ("M", "S_inv_M", "S2_inv_M", "S2mod_inv_M")
             if k in spectra]
    order += [k for k in spectra if k not in order]
    fig, axes = plt.subplots(2, 2, figsize=(10, 8))
    for ax, label in zip(axes.ravel(), order):
        vals = np.asarray(spectra[label]).ravel()
        ax.scatter(vals.real, vals.imag, s=4, alpha=0.6)
        if label != "M":
            ax.scatter([1.0], [0.0], marker="+", color="red", s=60)
        ax.set_title(label)
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.grid(True, alpha=0.3)
    for ax in axes.ravel()[len(order):]:
        ax.set_visible(False)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

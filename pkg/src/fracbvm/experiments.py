"""Benchmark presets and experiment drivers behind the CLI.

The benchmark problem is the source-free Gaussian pulse: alpha in (1,2),
x in [0,2], t in [0,1], d_plus = 0.6, d_minus = 0.5, f = 0,
u0(x) = exp(-(x-1.2)^2 / (2*0.08^2)), solved by GMRES(20) to a relative
(preconditioned) residual of 1e-8 from the zero initial guess.

`run_table` sweeps N in {24,48,96} x s in {16,32,64,128} with the four
preconditioners {I, S, S2, S2mod} and mirrors the reference tables' CSV
layout.  Benchmark runs default to the uniform banded assembly — the layout
whose iteration counts reproduce the reference tables (the corrected
auxiliary assembly converges at design order but its boundary rows are a
worse fit to the circulant preconditioner, inflating the S counts).
"""

from __future__ import annotations

import csv
import functools
import os
import time
from dataclasses import dataclass

import numpy as np

from .blocksystem import (BlockSystem, apply_block_operator,
                          assemble_block_system, dense_materialize,
                          dense_spatial)
from .bvm import BvmScheme, select_gam
from .errors import SizeGuardError, UsageError
from .gmres import GmresConfig, SolveReport, gmres_solve
from .grunwald import DiffusionProblem
from .oracle import dense_eigenvalues
from .precond import (apply_bccb_inverse, apply_strang_block_inverse,
                      build_bccb, build_strang_block)

__all__ = [
    "BenchmarkRow",
    "RunConfig",
    "gaussian_pulse_problem",
    "default_scheme",
    "make_preconditioner",
    "run_example1",
    "run_table",
    "write_benchmark_csv",
    "dump_spectra",
    "write_spectrum_csv",
    "check_stability",
    "solve_single",
    "write_residual_csv",
    "bccb_scaling_sweep",
    "PRECOND_LABELS",
    "BENCH_N", "BENCH_S",
]

DEFAULT_MU = 4
BENCH_N = (24, 48, 96)
BENCH_S = (16, 32, 64, 128)

# CLI spelling -> table column label
PRECOND_LABELS = {"none": "I", "strang": "S", "bccb": "S2", "bccb-mod": "S2mod"}


def gaussian_pulse_problem(alpha: float) -> DiffusionProblem:
    """The source-free Gaussian-pulse benchmark problem."""
    return DiffusionProblem(
        alpha=alpha, x_left=0.0, x_right=2.0, t0=0.0, T=1.0,
        d_plus=lambda x: 0.6 + 0.0 * x,
        d_minus=lambda x: 0.5 + 0.0 * x,
        source=lambda x, t: 0.0 * x,
        u0=lambda x: np.exp(-((x - 1.2) ** 2) / (2 * 0.08 ** 2)),
    )


@functools.lru_cache(maxsize=None)
def default_scheme(mu: int = DEFAULT_MU) -> BvmScheme:
    """The shipped scheme: the nu candidate passing the stability grid."""
    scheme, _ = select_gam(mu)
    return scheme


@dataclass(frozen=True)
class BenchmarkRow:
    N: int
    s: int
    label: str                  # I | S | S2 | S2mod
    iterations: int
    wall_time_seconds: float
    converged: bool


@dataclass(frozen=True)
class RunConfig:
    alpha: float
    N: int
    s: int
    preconditioner: str = "strang"      # CLI spelling
    restart: int = 20
    tol: float = 1e-8
    assembly: str = "auxiliary"
    out: str | None = None

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise UsageError(f"alpha must lie in (1,2), got {self.alpha}")
        if self.N < 2:
            raise UsageError(f"need N >= 2, got {self.N}")
        if self.s < DEFAULT_MU + 1:
            raise UsageError(f"need s >= {DEFAULT_MU + 1}, got {self.s}")
        if self.preconditioner not in PRECOND_LABELS:
            raise UsageError(
                f"unknown preconditioner {self.preconditioner!r}; "
                f"choose from {sorted(PRECOND_LABELS)}")


def make_preconditioner(kind: str, scheme: BvmScheme, sys: BlockSystem):
    """Build (apply_inverse or None) for a CLI-spelled preconditioner kind."""
    if kind in ("none", "I"):
        return None
    if kind in ("strang", "S"):
        P = build_strang_block(scheme, sys.s, sys)
        return lambda v: apply_strang_block_inverse(P, v)
    if kind in ("bccb", "S2"):
        P = build_bccb(scheme, sys.s, sys, modified=False)
        return lambda v: apply_bccb_inverse(P, v)
    if kind in ("bccb-mod", "S2mod"):
        P = build_bccb(scheme, sys.s, sys, modified=True)
        return lambda v: apply_bccb_inverse(P, v)
    raise UsageError(f"unknown preconditioner kind {kind!r}")


def _solve_cell(sys: BlockSystem, scheme: BvmScheme, kind: str,
                restart: int = 20, tol: float = 1e-8,
                track_true: bool = False):
    """Build the preconditioner and solve; wall time covers build + solve."""
    t0 = time.perf_counter()
    apply_p = make_preconditioner(kind, scheme, sys)
    cfg = GmresConfig(restart=restart, rel_tol=tol, track_true=track_true)
    x, rep = gmres_solve(lambda z: apply_block_operator(sys, z), apply_p,
                         sys.rhs, config=cfg)
    wall = time.perf_counter() - t0
    return x, rep, wall


def run_example1(alpha: float, N: int, s: int, precond: str,
                 assembly: str = "uniform",
                 restart: int = 20, tol: float = 1e-8) -> BenchmarkRow:
    """One benchmark cell: assemble, solve with GMRES(restart), report."""
    label = PRECOND_LABELS.get(precond, precond)
    if label not in PRECOND_LABELS.values():
        raise UsageError(f"unknown preconditioner {precond!r}")
    scheme = default_scheme()
    sys = assemble_block_system(scheme, gaussian_pulse_problem(alpha), N, s,
                                assembly=assembly)
    _, rep, wall = _solve_cell(sys, scheme, label, restart=restart, tol=tol)
    return BenchmarkRow(N=N, s=s, label=label, iterations=rep.iterations,
                        wall_time_seconds=wall, converged=rep.converged)


def run_table(which: int, assembly: str = "uniform") -> list[BenchmarkRow]:
    """Full benchmark sweep; alpha = 1.2 (table 1) or 1.5 (table 2)."""
    if which not in (1, 2):
        raise UsageError(f"table must be 1 or 2, got {which}")
    alpha = 1.2 if which == 1 else 1.5
    scheme = default_scheme()
    problem = gaussian_pulse_problem(alpha)
    rows = []
    for N in BENCH_N:
        for s in BENCH_S:
            sys = assemble_block_system(scheme, problem, N, s, assembly=assembly)
            for label in ("I", "S", "S2", "S2mod"):
                _, rep, wall = _solve_cell(sys, scheme, label)
                rows.append(BenchmarkRow(N=N, s=s, label=label,
                                         iterations=rep.iterations,
                                         wall_time_seconds=wall,
                                         converged=rep.converged))
    return rows


def write_benchmark_csv(rows: list[BenchmarkRow], path: str) -> None:
    """Mirror the reference tables: one line per (N, s), ITS/CPU per method."""
    cells = {(r.N, r.s, r.label): r for r in rows}
    keys = sorted({(r.N, r.s) for r in rows})
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "s",
                    "ITS_I", "CPU_I", "ITS_S", "CPU_S",
                    "ITS_S2", "CPU_S2", "ITS_S2mod", "CPU_S2mod"])
        for N, s in keys:
            line = [N, s]
            for label in ("I", "S", "S2", "S2mod"):
                r = cells.get((N, s, label))
                if r is None:
                    line += ["", ""]
                else:
                    its = r.iterations if r.converged else f"x({r.iterations})"
                    line += [its, f"{r.wall_time_seconds:.3f}"]
            w.writerow(line)


def write_spectrum_csv(path: str, label: str, values: np.ndarray, N: int) -> None:
    """Eigenvalue dump with columns (label, j, k, re, im).

    For BCCB-formula grids (j,k) is the natural index pair; for dense
    spectra the enumeration order is mapped to j = idx // N, k = idx % N.
    """
    vals = np.asarray(values).ravel()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "j", "k", "re", "im"])
        for idx, z in enumerate(vals):
            w.writerow([label, idx // N, idx % N,
                        repr(float(z.real)), repr(float(z.imag))])


def _dense_circulant(first_col: np.ndarray) -> np.ndarray:
    c = np.asarray(first_col)
    i = np.arange(c.size)
    return c[(i[:, None] - i[None, :]) % c.size]


def dump_spectra(N: int, s: int, alpha: float, out_dir: str,
                 assembly: str = "auxiliary") -> dict[str, np.ndarray]:
    """Dense spectra of M and the three preconditioned operators.

    Writes four CSV files into out_dir and returns {label: eigenvalues}.
    """
    from .precond import strang_wrap_column  # local to avoid cycle at import

    scheme = default_scheme()
    sys = assemble_block_system(scheme, gaussian_pulse_problem(alpha), N, s,
                                assembly=assembly)
    if sys.dim > 4096:
        raise SizeGuardError(
            f"spectra request of dimension {sys.dim} exceeds the dense guard; "
            "choose smaller N, s")
    M = dense_materialize(sys)
    n = s + 1
    J = dense_spatial(sys.op)
    cA = strang_wrap_column(scheme.main_alpha, scheme.nu, n)
    cB = strang_wrap_column(scheme.main_beta, scheme.nu, n)
    P_strang = build_strang_block(scheme, s, sys)
    P2 = build_bccb(scheme, s, sys, modified=False)
    P2m = build_bccb(scheme, s, sys, modified=True)
    sA, sB = _dense_circulant(cA), _dense_circulant(cB)
    eyeN = np.eye(N)
    S = np.kron(sA, eyeN) - sys.h * np.kron(sB, J)
    cJ = np.fft.ifft(np.conj(P2.sJ_eigs)).real  # first column of s(J_N)
    S2 = np.kron(sA, eyeN) - sys.h * np.kron(sB, _dense_circulant(cJ))
    # the modified s(A) is the circulant with the altered symbol
    cAm = np.fft.ifft(np.conj(P2m.sA_eigs)).real
    S2m = np.kron(_dense_circulant(cAm), eyeN) - sys.h * np.kron(
        sB, _dense_circulant(cJ))
    del P_strang  # built only to validate constructibility at this size
    spectra = {
        "M": dense_eigenvalues(M),
        "S_inv_M": dense_eigenvalues(np.linalg.solve(S, M)),
        "S2_inv_M": dense_eigenvalues(np.linalg.solve(S2, M)),
        "S2mod_inv_M": dense_eigenvalues(np.linalg.solve(S2m, M)),
    }
    os.makedirs(out_dir, exist_ok=True)
    for label, vals in spectra.items():
        write_spectrum_csv(os.path.join(out_dir, f"spectrum_{label}.csv"),
                           label, vals, N)
    return spectra


def check_stability(mu: int) -> dict:
    """Derive the candidate schemes and run the root-splitting grid test."""
    if mu not in (2, 4):
        raise UsageError(f"mu must be 2 or 4, got {mu}")
    scheme, verdicts = select_gam(mu)
    return {
        "mu": mu,
        "candidates": {int(nu): bool(ok) for nu, ok in verdicts.items()},
        "chosen_nu": scheme.nu,
        "order": scheme.order,
        "main_alpha": scheme.main_alpha.tolist(),
        "main_beta": scheme.main_beta.tolist(),
        "main_beta_exact": [str(b) for b in scheme.main_beta_exact],
        "grid": "40x40, Re q in [-1e3, -1e-3] (log), |Im q| <= 1e3",
    }


def solve_single(cfg: RunConfig) -> tuple[dict, SolveReport]:
    """One solve with full reporting: (JSON-serializable dict, raw report)."""
    scheme = default_scheme()
    t_build0 = time.perf_counter()
    sys = assemble_block_system(scheme, gaussian_pulse_problem(cfg.alpha),
                                cfg.N, cfg.s, assembly=cfg.assembly)
    t_build = time.perf_counter() - t_build0
    x, rep, wall = _solve_cell(sys, scheme, cfg.preconditioner,
                               restart=cfg.restart, tol=cfg.tol,
                               track_true=True)
    U = x.reshape(cfg.s + 1, cfg.N)
    return {
        "config": {
            "alpha": cfg.alpha, "N": cfg.N, "s": cfg.s,
            "preconditioner": cfg.preconditioner, "restart": cfg.restart,
            "tol": cfg.tol, "assembly": cfg.assembly,
            "mu": scheme.mu, "nu": scheme.nu,
        },
        "dimension": sys.dim,
        "iterations": rep.iterations,
        "restarts": rep.restarts,
        "converged": rep.converged,
        "final_relative_residual": rep.final_relative_residual,
        "solution_final_time_l2": float(np.linalg.norm(U[-1])),
        "assembly_seconds": t_build,
        "solve_seconds": wall,
        "timing_note": "solve_seconds covers preconditioner build plus GMRES",
    }, rep


def write_residual_csv(path: str, rep: SolveReport) -> None:
    """Per-iteration history: (iteration, preconditioned residual, true residual)."""
    hist = rep.residual_history
    true = rep.true_residual_history
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "preconditioned_residual", "true_residual"])
        for i, pr in enumerate(hist):
            tr = true[i] if true is not None and i < len(true) else ""
            w.writerow([i, repr(float(pr)), repr(float(tr)) if tr != "" else ""])


def bccb_scaling_sweep(alpha: float = 1.5,
                       sizes: tuple = (64, 128, 256, 512),
                       repeats: int = 2) -> list[tuple[int, float]]:
    """Wall time of the BCCB-preconditioned solve at N = s+1 over a doubling
    sweep; returns [(dimension, seconds)] with the fastest of `repeats`."""
    scheme = default_scheme()
    out = []
    for Np in sizes:
        N, s = Np, Np - 1
        sys = assemble_block_system(scheme, gaussian_pulse_problem(alpha),
                                    N, s, assembly="uniform")
        best = np.inf
        for _ in range(repeats):
            _, rep, wall = _solve_cell(sys, scheme, "S2mod")
            best = min(best, wall)
        out.append(((s + 1) * N, best))
    return out

"""All-at-once space-time system M u = e_1 (x) u0 + h (B (x) I) f.

With the time matrices A, B of the boundary value scheme and the spatial
operator J_N, the block operator is

    M = A (x) I_N  -  h B (x) J_N,      dimension (s+1) N,

acting on the time-major stacking (u_0^T, ..., u_s^T)^T.  The operator is
applied matrix-free (banded rows of A, B + fast J_N applies); a guarded
dense materialization exists for oracles and spectra dumps.

Two assembly layouts are supported (see bvm.assemble_A_B*):
"auxiliary" (default) is the corrected scheme with exact initial-value row
and auxiliary boundary rows; "uniform" is the plain banded benchmark layout
that reproduces the reference iteration tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .bvm import BvmScheme, assemble_A_B, assemble_A_B_uniform
from .errors import SizeGuardError, UsageError
from .grunwald import (DiffusionProblem, SpatialOperator, apply_many,
                       build_spatial_operator, _sample)

__all__ = [
    "BlockSystem",
    "assemble_block_system",
    "apply_block_operator",
    "dense_materialize",
    "dense_spatial",
]

DENSE_GUARD = 4096


@dataclass(frozen=True)
class BlockSystem:
    scheme: BvmScheme
    s: int
    h: float
    op: SpatialOperator
    A: sp.csr_matrix
    B: sp.csr_matrix
    rhs: np.ndarray                      # shape ((s+1)*N,)
    f_samples: np.ndarray                # shape (s+1, N)
    assembly: str = "auxiliary"
    x_nodes: np.ndarray = field(default=None, repr=False)   # interior grid
    t_nodes: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return (self.s + 1) * self.op.n


def assemble_block_system(scheme: BvmScheme, problem: DiffusionProblem,
                          N: int, s: int,
                          assembly: str = "auxiliary") -> BlockSystem:
    """Build J_N, the time matrices, the sampled source, and the rhs."""
    if assembly not in ("auxiliary", "uniform"):
        raise UsageError(f"unknown assembly layout {assembly!r}")
    op = build_spatial_operator(problem, N)
    if assembly == "auxiliary":
        A, B = assemble_A_B(scheme, s)
    else:
        A, B = assemble_A_B_uniform(scheme, s)
    h = (problem.T - problem.t0) / s
    xs = problem.x_left + op.dx * np.arange(1, N + 1)
    ts = problem.t0 + h * np.arange(s + 1)
    F = np.empty((s + 1, N))
    for n, t in enumerate(ts):
        F[n] = _sample(lambda x, _t=t: problem.source(x, _t), xs)
    R = h * np.asarray(B @ F)
    R[0] += _sample(problem.u0, xs)
    return BlockSystem(scheme=scheme, s=s, h=h, op=op, A=A, B=B,
                       rhs=R.ravel(), f_samples=F, assembly=assembly,
                       x_nodes=xs, t_nodes=ts)


def apply_block_operator(sys: BlockSystem, z: np.ndarray) -> np.ndarray:
    """M @ z via banded row combinations and fast J_N applies."""
    z = np.asarray(z)
    if z.shape != (sys.dim,):
        raise UsageError(f"expected a length-{sys.dim} vector, got shape {z.shape}")
    Z = z.reshape(sys.s + 1, sys.op.n)
    W = apply_many(sys.op, Z)            # J_N applied to every time block
    out = np.asarray(sys.A @ Z) - sys.h * np.asarray(sys.B @ W)
    return out.ravel()


def dense_spatial(op: SpatialOperator) -> np.ndarray:
    """Dense J_N from the factored form (diagonals times Toeplitz)."""
    if op.n > DENSE_GUARD:
        raise SizeGuardError(f"dense J_N request for N={op.n} exceeds guard {DENSE_GUARD}")
    g = op.coeffs.values
    row = np.zeros(op.n)
    row[0], row[1] = g[1], g[0]
    G = sla.toeplitz(g[1:], row)
    return op._rp[:, None] * G + op._rm[:, None] * G.T


def dense_materialize(sys: BlockSystem) -> np.ndarray:
    """Dense M for oracles and spectra; guarded against huge allocations."""
    if sys.dim > DENSE_GUARD:
        raise SizeGuardError(
            f"dense materialization of dimension {sys.dim} exceeds guard {DENSE_GUARD}")
    J = dense_spatial(sys.op)
    N = sys.op.n
    return np.kron(sys.A.toarray(), np.eye(N)) - sys.h * np.kron(sys.B.toarray(), J)

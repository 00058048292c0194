"""Brute-force dense reference implementations for tests and spectra dumps.

Deliberately thin wrappers over LAPACK so that every fast path in the
package is checked against an independent computational route: the fast
paths use FFT algebra and banded structure, the oracles use dense
factorizations.  All entry points enforce a size guard against accidental
huge allocations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import SingularMatrixError, SizeGuardError, UsageError

__all__ = ["DenseSnapshot", "SIZE_GUARD", "dense_solve", "dense_eigenvalues",
           "numerical_rank"]

SIZE_GUARD = 4096
ILL_CONDITIONED_RCOND = 1e-12


@dataclass(frozen=True)
class DenseSnapshot:
    """A labeled dense matrix capped by the size guard."""

    label: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2:
            raise UsageError(f"snapshot {self.label!r} must be 2-d, got {m.ndim}-d")
        if max(m.shape) > SIZE_GUARD:
            raise SizeGuardError(
                f"snapshot {self.label!r} of shape {m.shape} exceeds guard {SIZE_GUARD}")


def _checked_square(matrix) -> np.ndarray:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > SIZE_GUARD:
        raise SizeGuardError(f"matrix of size {m.shape[0]} exceeds guard {SIZE_GUARD}")
    return m


def dense_solve(matrix, rhs) -> np.ndarray:
    """LU solve with partial pivoting plus a reciprocal-condition check."""
    m = _checked_square(matrix)
    rhs = np.asarray(rhs)
    if rhs.shape[0] != m.shape[0]:
        raise UsageError(f"rhs length {rhs.shape[0]} does not match size {m.shape[0]}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(m)
    diag = np.abs(np.diag(lu))
    if diag.min() == 0.0:
        raise SingularMatrixError(
            f"matrix is singular: zero pivot at position {int(diag.argmin())}")
    gecon = sla.lapack.zgecon if np.iscomplexobj(lu) else sla.lapack.dgecon
    anorm = np.linalg.norm(m, 1)
    rcond = gecon(lu, anorm)[0]
    if rcond < np.finfo(float).eps * 1e-2:
        raise SingularMatrixError(
            f"matrix is numerically singular (rcond = {rcond:.3e}, "
            f"min pivot = {diag.min():.3e})")
    if rcond < ILL_CONDITIONED_RCOND:
        warnings.warn(
            f"ill-conditioned dense solve (rcond = {rcond:.3e}); "
            "the solution may lose accuracy", RuntimeWarning, stacklevel=2)
    return sla.lu_solve((lu, piv), rhs)


def dense_eigenvalues(matrix) -> np.ndarray:
    """Full nonsymmetric spectrum via the QR algorithm."""
    m = _checked_square(matrix)
    return sla.eigvals(m)


def numerical_rank(matrix, rel_threshold: float) -> int:
    """Number of singular values above rel_threshold * sigma_max."""
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise UsageError(f"expected a matrix, got {m.ndim}-d array")
    if max(m.shape) > SIZE_GUARD:
        raise SizeGuardError(f"matrix of shape {m.shape} exceeds guard {SIZE_GUARD}")
    sv = sla.svdvals(m)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int((sv > rel_threshold * sv[0]).sum())

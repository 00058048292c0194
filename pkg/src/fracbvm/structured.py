"""Toeplitz/circulant kernels: fast products, spectra, solves, Strang columns.

Circulant action is the circular convolution with the first column, so with
numpy's FFT sign convention  C @ x = ifft(fft(c) * fft(x)).  The *reported*
eigenvalue ordering (`circulant_eigenvalues`) uses lambda_j = sum_r c_r w^{rj}
with w = exp(+2*pi*i/N); for real first columns the two orderings are
conjugate permutations of each other and identical as multisets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError, UsageError
from .grunwald import GrunwaldCoefficients

__all__ = [
    "ToeplitzMatrix",
    "CirculantMatrix",
    "toeplitz_matvec",
    "circulant_eigenvalues",
    "circulant_solve",
    "strang_circulant_of_grunwald",
]


@dataclass(frozen=True)
class ToeplitzMatrix:
    """Entry (i,j) = first_col[i-j] for i >= j, else first_row[j-i]."""

    first_col: np.ndarray
    first_row: np.ndarray

    def __post_init__(self):
        fc = np.asarray(self.first_col)
        fr = np.asarray(self.first_row)
        if fc.ndim != 1 or fr.ndim != 1 or fc.size != fr.size:
            raise UsageError("first_col and first_row must be 1-d of equal length")
        if fc[0] != fr[0]:
            raise UsageError("first_col[0] must equal first_row[0]")

    @property
    def n(self) -> int:
        return len(self.first_col)

    def dense(self) -> np.ndarray:
        i = np.arange(self.n)
        d = i[:, None] - i[None, :]
        return np.where(d >= 0,
                        np.asarray(self.first_col)[np.abs(d)],
                        np.asarray(self.first_row)[np.abs(d)])


@dataclass(frozen=True)
class CirculantMatrix:
    """Circulant defined by its first column; diagonalized by the DFT."""

    first_col: np.ndarray

    @property
    def n(self) -> int:
        return len(self.first_col)

    def dense(self) -> np.ndarray:
        c = np.asarray(self.first_col)
        i = np.arange(self.n)
        return c[(i[:, None] - i[None, :]) % self.n]


def toeplitz_matvec(t: ToeplitzMatrix, v: np.ndarray) -> np.ndarray:
    """T @ v through a 2N circulant embedding (zero-filled slack entry)."""
    v = np.asarray(v)
    N = t.n
    if v.shape != (N,):
        raise UsageError(f"expected a length-{N} vector, got shape {v.shape}")
    emb = np.concatenate([t.first_col, [0.0], np.asarray(t.first_row)[:0:-1]])
    buf = np.zeros(2 * N, dtype=complex)
    buf[:N] = v
    out = np.fft.ifft(np.fft.fft(emb) * np.fft.fft(buf))[:N]
    if not (np.iscomplexobj(t.first_col) or np.iscomplexobj(v)):
        out = out.real
    return out


def circulant_eigenvalues(c: CirculantMatrix) -> np.ndarray:
    """Eigenvalues lambda_j = sum_r c_r w^{rj}, w = exp(2*pi*i/N), j = 0..N-1."""
    col = np.asarray(c.first_col)
    if col.size == 0:
        raise UsageError("empty circulant")
    return np.fft.ifft(col) * col.size


def circulant_solve(c: CirculantMatrix, rhs: np.ndarray) -> np.ndarray:
    """Solve C x = rhs by transform, pointwise division, inverse transform."""
    col = np.asarray(c.first_col)
    rhs = np.asarray(rhs)
    if rhs.shape != col.shape:
        raise UsageError(f"rhs shape {rhs.shape} does not match circulant size {col.shape}")
    lam = np.fft.fft(col)
    mx = np.abs(lam).max()
    if mx == 0.0 or np.abs(lam).min() < 1e-14 * mx:
        raise SingularMatrixError(
            f"circulant is numerically singular (min|eig| = {np.abs(lam).min():.3e}, "
            f"max|eig| = {mx:.3e})")
    out = np.fft.ifft(np.fft.fft(rhs) / lam)
    if not (np.iscomplexobj(col) or np.iscomplexobj(rhs)):
        out = out.real
    return out


def strang_circulant_of_grunwald(coeffs: GrunwaldCoefficients,
                                 N: int) -> tuple[CirculantMatrix, CirculantMatrix]:
    """Strang-type circulants of the Grunwald Toeplitz generator and its transpose.

    First column of s(G):   [g_1, g_2, ..., g_cut, 0, ..., 0, g_0],
    first column of s(G.T): [g_1, g_0, 0, ..., 0, g_cut, ..., g_2],
    with cut = floor((N+1)/2); the second is exactly s(G).T as a circulant.
    """
    if N < 3:
        raise UsageError(f"need N >= 3 to hold the band and the cutoff, got {N}")
    cut = (N + 1) // 2
    g = np.asarray(coeffs.values)
    if g.size < cut + 1:
        raise UsageError(
            f"need Grunwald coefficients up to g_{cut}, got only {g.size - 1}")
    col = np.zeros(N)
    col[:cut] = g[1:cut + 1]
    col[N - 1] = g[0]
    colT = np.zeros(N)
    colT[0] = col[0]
    colT[1:] = col[:0:-1]
    return CirculantMatrix(col), CirculantMatrix(colT)

"""Shifted Grunwald discretization of the two-sided fractional derivative.

For 1 < alpha < 2 the Grunwald coefficients

    g_0 = 1,   g_{k+1} = (1 - (alpha+1)/(k+1)) g_k

give the shifted first-order approximation of the Riemann-Liouville
derivatives, and the semi-discrete operator on the interior grid
x_i = x_L + i*dx, i = 1..N, dx = (x_R - x_L)/(N+1) is

    J_N = (1/dx^alpha) * (D_plus @ G + D_minus @ G.T)

with G the N x N Toeplitz matrix whose first column is [g_1, ..., g_N] and
first row [g_1, g_0, 0, ..., 0].  The coefficients satisfy g_1 = -alpha < 0,
g_2 > g_3 > ... > 0 and all partial sums from n >= 1 are strictly negative,
which places every Gershgorin disc of J_N strictly in the left half plane.

Everything here stores O(N) data; dense J_N only ever appears in oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, UnsupportedConfigurationError, UsageError

__all__ = [
    "GrunwaldCoefficients",
    "DiffusionProblem",
    "SpatialOperator",
    "GershgorinDisc",
    "grunwald_coefficients",
    "build_spatial_operator",
    "apply_spatial_operator",
    "operator_entry",
    "gershgorin_discs",
    "wiener_partial_sum",
    "wiener_limit",
]


@dataclass(frozen=True)
class GrunwaldCoefficients:
    """Coefficients g_0..g_K for one value of alpha."""

    alpha: float
    values: np.ndarray  # shape (K+1,)


def grunwald_coefficients(alpha: float, K: int) -> GrunwaldCoefficients:
    """Grunwald coefficients g_0..g_K by the multiplicative recurrence.

    Refuses alpha outside (1,2): the recurrence itself would still run, but
    the sign pattern every spectral statement rests on would not hold.
    """
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1,2), got {alpha}")
    if K < 0:
        raise UsageError(f"coefficient count K must be >= 0, got {K}")
    k = np.arange(1, K + 1, dtype=float)
    factors = 1.0 - (alpha + 1.0) / k
    g = np.empty(K + 1)
    g[0] = 1.0
    if K:
        np.cumprod(factors, out=g[1:])
    return GrunwaldCoefficients(alpha=alpha, values=g)


@dataclass(frozen=True)
class DiffusionProblem:
    """Continuous two-sided fractional diffusion problem.

    u_t = d_plus(x) D^alpha_+ u + d_minus(x) D^alpha_- u + source(x,t)
    on (x_left, x_right) x (t0, T], homogeneous Dirichlet boundaries,
    u(x, t0) = u0(x).  Coefficients are time independent by design: the
    all-at-once system has a single fixed spatial operator.
    """

    alpha: float
    x_left: float
    x_right: float
    t0: float
    T: float
    d_plus: Callable[[float], float]
    d_minus: Callable[[float], float]
    source: Callable[[float, float], float]
    u0: Callable[[float], float]

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise DomainError(f"alpha must lie in (1,2), got {self.alpha}")
        if not self.x_left < self.x_right:
            raise DomainError("require x_left < x_right")
        if not self.t0 < self.T:
            raise DomainError("require t0 < T")


def _sample(fn, xs) -> np.ndarray:
    """Evaluate a scalar callable on a grid, tolerating vectorized ones."""
    try:
        out = np.asarray(fn(xs), dtype=float)
        if out.shape == xs.shape:
            return out
    except Exception:
        pass
    return np.array([float(fn(x)) for x in xs])


@dataclass(frozen=True)
class SpatialOperator:
    """J_N in factored form: diagonals plus the Toeplitz generator.

    The padded FFT of the length-2N circulant embeddings of G and G.T is
    precomputed once; applications are two circular convolutions plus
    diagonal scaling.
    """

    n: int
    dx: float
    coeffs: GrunwaldCoefficients          # g_0..g_N
    d_plus_diag: np.ndarray               # d_plus(x_i), i = 1..N
    d_minus_diag: np.ndarray
    _rp: np.ndarray = field(repr=False)   # d_plus_diag / dx^alpha
    _rm: np.ndarray = field(repr=False)
    _fg: np.ndarray = field(repr=False)   # fft of embedded G generator
    _fgt: np.ndarray = field(repr=False)  # fft of embedded G.T generator

    @property
    def alpha(self) -> float:
        return self.coeffs.alpha


def _embed_toeplitz(first_col: np.ndarray, first_row: np.ndarray) -> np.ndarray:
    """FFT of the 2N circulant embedding of a Toeplitz matrix.

    Embedding first column: [c_0..c_{N-1}, 0, r_{N-1}..r_1] (zero-filled to
    exactly 2N for run-to-run bit stability).
    """
    N = first_col.size
    emb = np.concatenate([first_col, [0.0], first_row[:0:-1]])
    assert emb.size == 2 * N
    return np.fft.fft(emb)


def build_spatial_operator(problem: DiffusionProblem, N: int) -> SpatialOperator:
    """Sample the coefficients on the interior grid and factor J_N."""
    if N < 2:
        raise UsageError(f"need N >= 2 interior points, got {N}")
    dx = (problem.x_right - problem.x_left) / (N + 1)
    xs = problem.x_left + dx * np.arange(1, N + 1)
    dp = _sample(problem.d_plus, xs)
    dm = _sample(problem.d_minus, xs)
    if (dp < 0).any() or (dm < 0).any():
        raise DomainError("diffusion coefficients must be nonnegative on the grid")
    if ((dp + dm) == 0).any():
        raise DomainError("d_plus + d_minus must be positive at every grid point")
    coeffs = grunwald_coefficients(problem.alpha, N)
    g = coeffs.values
    scale = dx ** (-problem.alpha)
    # G: first column [g_1..g_N], first row [g_1, g_0, 0, ...]
    col = g[1:]
    row = np.zeros(N)
    row[0], row[1] = g[1], g[0]
    return SpatialOperator(
        n=N,
        dx=dx,
        coeffs=coeffs,
        d_plus_diag=dp,
        d_minus_diag=dm,
        _rp=dp * scale,
        _rm=dm * scale,
        _fg=_embed_toeplitz(col, row),
        _fgt=_embed_toeplitz(row, col),
    )


def _conv_apply(femb: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Toeplitz product for each row of V via the padded embedding."""
    m, N = V.shape
    buf = np.zeros((m, 2 * N), dtype=complex)
    buf[:, :N] = V
    out = np.fft.ifft(np.fft.fft(buf, axis=1) * femb, axis=1)[:, :N]
    return out


def apply_many(op: SpatialOperator, V: np.ndarray) -> np.ndarray:
    """Apply J_N to every row of an (m, N) array; complex inputs allowed."""
    V = np.atleast_2d(V)
    if V.shape[1] != op.n:
        raise UsageError(f"expected row length {op.n}, got {V.shape[1]}")
    out = op._rp * _conv_apply(op._fg, V) + op._rm * _conv_apply(op._fgt, V)
    if not np.iscomplexobj(V):
        out = out.real
    return out


def apply_spatial_operator(op: SpatialOperator, v: np.ndarray) -> np.ndarray:
    """J_N @ v in O(N log N)."""
    v = np.asarray(v)
    if v.ndim != 1 or v.size != op.n:
        raise UsageError(f"expected a length-{op.n} vector, got shape {v.shape}")
    return apply_many(op, v[None, :])[0]


def operator_entry(op: SpatialOperator, i: int, j: int) -> float:
    """Entry p_ij of J_N, indices 1-based as in the usual stencil numbering.

    Five cases: diagonal, sub/superdiagonal, far left, far right.  Note the
    sign structure: p_ii < 0, all off-diagonal entries >= 0 (g_1 is the only
    negative coefficient), which is what drives the Gershgorin localization.
    """
    if not (1 <= i <= op.n and 1 <= j <= op.n):
        raise UsageError(f"indices must lie in 1..{op.n}, got ({i}, {j})")
    g = op.coeffs.values
    rp, rm = op._rp[i - 1], op._rm[i - 1]
    if j == i:
        return (rp + rm) * g[1]
    if j == i - 1:
        return rp * g[2] + rm * g[0]
    if j == i + 1:
        return rp * g[0] + rm * g[2]
    if j < i - 1:
        return rp * g[i - j + 1]
    return rm * g[j - i + 1]


@dataclass(frozen=True)
class GershgorinDisc:
    center: float
    radius: float


def gershgorin_discs(op: SpatialOperator) -> list[GershgorinDisc]:
    """Row discs of J_N: centers (r+ + r-) g_1 < 0, radii R_i = sum_{j!=i} |p_ij|.

    Radius of row i is r+ * sum_{k=0,k!=1}^{i} g_k + r- * sum_{k=0,k!=1}^{N-i+1} g_k
    (all off-diagonal entries are nonnegative, so no absolute values needed),
    except that the g_0 term drops out of the r+ sum at i = N and out of the
    r- sum at i = 1, where the shifted column would fall outside the grid;
    strict partial-sum negativity gives R_i < -center.
    """
    g = op.coeffs.values
    S = np.cumsum(g)  # S[m] = g_0 + ... + g_m
    i = np.arange(1, op.n + 1)
    centers = (op._rp + op._rm) * g[1]
    plus_sums = S[i] - g[1]
    minus_sums = S[op.n - i + 1] - g[1]
    plus_sums[-1] -= g[0]
    minus_sums[0] -= g[0]
    radii = op._rp * plus_sums + op._rm * minus_sums
    return [GershgorinDisc(float(c), float(r)) for c, r in zip(centers, radii)]


def _constant_value(diag: np.ndarray, name: str) -> float:
    if np.ptp(diag) != 0.0:
        raise UnsupportedConfigurationError(
            f"{name} must be constant on the grid for Wiener-class sums")
    return float(diag[0])


def wiener_partial_sum(op: SpatialOperator, K: int) -> float:
    """Partial sum (1/dx^alpha)(d+ + d-) * sum_{k=-1}^{K} |g_{k+1}|.

    For constant coefficients J_N is Toeplitz and this is the partial
    absolute sum of its diagonal symbol; it increases monotonically to
    2*alpha*(d+ + d-)/dx^alpha, so the symbol is in the Wiener class.
    """
    if K < 0:
        raise UsageError(f"need K >= 0, got {K}")
    dsum = _constant_value(op.d_plus_diag, "d_plus") + _constant_value(
        op.d_minus_diag, "d_minus")
    g = grunwald_coefficients(op.alpha, K + 1).values
    return dsum * op.dx ** (-op.alpha) * float(np.abs(g).sum())


def wiener_limit(op: SpatialOperator) -> float:
    """Limit of the Wiener partial sums: 2*alpha*(d+ + d-)/dx^alpha."""
    dsum = _constant_value(op.d_plus_diag, "d_plus") + _constant_value(
        op.d_minus_diag, "d_minus")
    return 2.0 * op.alpha * dsum * op.dx ** (-op.alpha)

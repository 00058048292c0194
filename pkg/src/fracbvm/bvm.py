"""Generalized Adams (boundary value) methods: derivation and assembly.

The main method is the mu-step scheme

    u_{n+nu} - u_{n+nu-1} = h * sum_{i=0}^{mu} beta_i u'_{n+i}

whose beta coefficients are fixed uniquely by the order conditions

    sum_i alpha_i * i^q = q * sum_i beta_i * i^{q-1},   q = 1..mu+1,

solved here in exact rational arithmetic.  Used as a boundary value method
it needs nu initial and mu-nu final conditions; the auxiliary rows are the
one-step differences u_j - u_{j-1} of the same Adams family anchored at the
first/last mu+1 time nodes, so every row of the scheme attains order mu+1.

The time matrices come in two layouts:

* `assemble_A_B` - the corrected layout: first row of A is e_1 (imposes the
  initial value exactly, B's first row is zero), initial auxiliary rows are
  pinned to columns 0..mu, the main band slides, final auxiliary rows are
  pinned to the last mu+1 columns.  This is the layout that attains the
  design order of the method.
* `assemble_A_B_uniform` - every row carries the main band at columns
  m-nu..m-nu+mu with plain truncation at both edges (the classic banded
  `spdiags`-style assembly).  The first row of A still degenerates to e_1,
  but B keeps its truncated band there, so the initial value is imposed only
  to O(h).  This is the assembly variant whose preconditioned iteration
  counts reproduce the reference benchmark tables; use it for benchmarking,
  not for accuracy studies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .errors import UsageError

__all__ = [
    "BvmScheme",
    "CharacteristicPolynomials",
    "adams_beta_exact",
    "derive_main_method",
    "derive_auxiliary_methods",
    "derive_scheme",
    "assemble_A_B",
    "assemble_A_B_uniform",
    "characteristic_polynomials",
    "stability_region_membership",
    "stability_grid_ok",
    "select_gam",
    "order_condition_residual",
]


def _solve_exact(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals (partial pivoting by != 0)."""
    n = len(rhs)
    M = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise RuntimeError("order-condition system is singular")  # cannot occur
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def _ipow(i: int, e: int) -> int:
    return 1 if e == 0 else i ** e


def adams_beta_exact(mu: int, j: int) -> list[Fraction]:
    """Exact beta making u_j - u_{j-1} = h*sum_i beta_i u'_i order mu+1 on nodes 0..mu."""
    if not 1 <= j <= mu:
        raise UsageError(f"difference offset j must lie in 1..{mu}, got {j}")
    M = [[Fraction(q * _ipow(i, q - 1)) for i in range(mu + 1)]
         for q in range(1, mu + 2)]
    rhs = [Fraction(_ipow(j, q) - _ipow(j - 1, q)) for q in range(1, mu + 2)]
    return _solve_exact(M, rhs)


@dataclass(frozen=True)
class BvmScheme:
    """A derived GAM: main method plus auxiliary initial/final rows."""

    mu: int
    nu: int
    main_alpha: np.ndarray                      # length mu+1
    main_beta: np.ndarray
    initial_aux: tuple = ()                     # nu-1 rows of (alpha, beta)
    final_aux: tuple = ()                       # mu-nu rows of (alpha, beta)
    order: int = 0
    main_beta_exact: tuple = field(default=(), repr=False)


def derive_main_method(mu: int, nu: int) -> tuple[np.ndarray, np.ndarray]:
    """Main GAM coefficients: alpha = e_nu - e_{nu-1}, beta by order conditions."""
    if not 1 <= nu <= mu:
        raise UsageError(f"need 1 <= nu <= mu, got nu={nu}, mu={mu}")
    alpha = np.zeros(mu + 1)
    alpha[nu] = 1.0
    alpha[nu - 1] = -1.0
    beta = np.array([float(b) for b in adams_beta_exact(mu, nu)])
    return alpha, beta


def _aux_row(mu: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    alpha = np.zeros(mu + 1)
    alpha[j] = 1.0
    alpha[j - 1] = -1.0
    beta = np.array([float(b) for b in adams_beta_exact(mu, j)])
    return alpha, beta


def derive_auxiliary_methods(scheme: BvmScheme) -> BvmScheme:
    """Attach the nu-1 initial and mu-nu final auxiliary rows.

    Initial row j (j = 1..nu-1) discretizes u_j - u_{j-1} on nodes 0..mu;
    final rows are the offsets j = nu+1..mu of the same family, later
    anchored at the last mu+1 time nodes.  All rows share the main method's
    order mu+1 by construction.
    """
    mu, nu = scheme.mu, scheme.nu
    initial = tuple(_aux_row(mu, j) for j in range(1, nu))
    final = tuple(_aux_row(mu, j) for j in range(nu + 1, mu + 1))
    return BvmScheme(
        mu=mu, nu=nu,
        main_alpha=scheme.main_alpha, main_beta=scheme.main_beta,
        initial_aux=initial, final_aux=final,
        order=mu + 1, main_beta_exact=scheme.main_beta_exact,
    )


def derive_scheme(mu: int, nu: int) -> BvmScheme:
    """Derive the complete order-(mu+1) GAM with auxiliary rows."""
    alpha, beta = derive_main_method(mu, nu)
    part = BvmScheme(mu=mu, nu=nu, main_alpha=alpha, main_beta=beta,
                     main_beta_exact=tuple(adams_beta_exact(mu, nu)))
    return derive_auxiliary_methods(part)


def order_condition_residual(alpha: np.ndarray, beta: np.ndarray, p: int) -> float:
    """max over q = 0..p of |sum_i alpha_i i^q - q sum_i beta_i i^{q-1}|."""
    i = np.arange(len(alpha), dtype=float)
    worst = abs(alpha.sum())  # q = 0
    for q in range(1, p + 1):
        lhs = (alpha * i ** q).sum()
        rhs = q * (beta * np.where(i == 0, 1.0 if q == 1 else 0.0, i ** (q - 1))).sum()
        worst = max(worst, abs(lhs - rhs))
    return worst


def assemble_A_B(scheme: BvmScheme, s: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Corrected (s+1)x(s+1) time matrices A, B (sparse banded).

    Row 0 of A is e_1 (u(t0) = u0 exactly; row 0 of B is zero); rows
    1..nu-1 hold the initial auxiliary rows at columns 0..mu; rows
    nu..s-mu+nu slide the main band; the last mu-nu rows hold the final
    auxiliary rows at columns s-mu..s.
    """
    mu, nu = scheme.mu, scheme.nu
    if s < mu + 1:
        raise UsageError(f"need s >= mu+1 = {mu + 1}, got {s}")
    A = sp.lil_matrix((s + 1, s + 1))
    B = sp.lil_matrix((s + 1, s + 1))
    A[0, 0] = 1.0
    for j, (ar, br) in enumerate(scheme.initial_aux, start=1):
        A[j, 0:mu + 1] = ar
        B[j, 0:mu + 1] = br
    for m in range(nu, s - mu + nu + 1):
        A[m, m - nu:m - nu + mu + 1] = scheme.main_alpha
        B[m, m - nu:m - nu + mu + 1] = scheme.main_beta
    for k, (ar, br) in enumerate(scheme.final_aux):
        m = s - mu + nu + 1 + k
        A[m, s - mu:s + 1] = ar
        B[m, s - mu:s + 1] = br
    return A.tocsr(), B.tocsr()


def assemble_A_B_uniform(scheme: BvmScheme, s: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Benchmark-reproduction layout: the main band in every row, truncated.

    Row m of both matrices carries the main coefficients at columns
    m-nu..m-nu+mu, clipped to [0, s].  No auxiliary rows; B's first row is
    the truncated band rather than zero, so use this only with data whose
    right-hand side vanishes there (e.g. source-free benchmark runs).
    """
    mu, nu = scheme.mu, scheme.nu
    if s < mu + 1:
        raise UsageError(f"need s >= mu+1 = {mu + 1}, got {s}")
    A = sp.lil_matrix((s + 1, s + 1))
    B = sp.lil_matrix((s + 1, s + 1))
    for m in range(s + 1):
        lo = max(0, m - nu)
        hi = min(s + 1, m - nu + mu + 1)
        A[m, lo:hi] = scheme.main_alpha[lo - (m - nu):hi - (m - nu)]
        B[m, lo:hi] = scheme.main_beta[lo - (m - nu):hi - (m - nu)]
    return A.tocsr(), B.tocsr()


@dataclass(frozen=True)
class CharacteristicPolynomials:
    """rho, sigma as ascending coefficient vectors of length mu+1."""

    rho: np.ndarray
    sigma: np.ndarray


def characteristic_polynomials(scheme: BvmScheme) -> CharacteristicPolynomials:
    return CharacteristicPolynomials(rho=scheme.main_alpha.copy(),
                                     sigma=scheme.main_beta.copy())


def stability_region_membership(scheme: BvmScheme, q: complex) -> bool:
    """Is q in the (nu, mu-nu) root-splitting region of rho - q*sigma?

    True iff exactly nu roots lie in |z| < 1-eps and mu-nu in |z| > 1+eps
    (eps = 1e-10); roots inside the annulus around |z| = 1 disqualify.  When
    the leading coefficient vanishes the missing roots sit at infinity and
    are counted as outside.
    """
    eps = 1e-10
    coef = scheme.main_alpha.astype(complex) - q * scheme.main_beta.astype(complex)
    mu, nu = scheme.mu, scheme.nu
    scalemax = np.abs(coef).max()
    if scalemax == 0.0:
        return False
    desc = coef[::-1].copy()
    # strip (numerically) vanished leading coefficients; each lost degree
    # is a root at infinity
    lead = 0
    while lead < len(desc) - 1 and abs(desc[lead]) <= 1e-13 * scalemax:
        lead += 1
    desc = desc[lead:]
    if len(desc) <= 1:
        roots = np.array([])
    else:
        roots = np.roots(desc)
    mods = np.abs(roots)
    inside = int((mods < 1.0 - eps).sum())
    outside = int((mods > 1.0 + eps).sum()) + (mu - len(roots))
    return inside == nu and outside == mu - nu


def stability_grid_ok(scheme: BvmScheme, n_re: int = 40, n_im: int = 40) -> bool:
    """Membership on a left-half-plane grid: Re q in [-1e3, -1e-3] (log
    spaced), |Im q| <= 1e3.  All points must belong."""
    res = -np.logspace(-3, 3, n_re)
    ims = np.linspace(-1e3, 1e3, n_im)
    return all(stability_region_membership(scheme, complex(re, im))
               for re in res for im in ims)


def select_gam(mu: int) -> tuple[BvmScheme, dict]:
    """Derive the central-nu candidates, keep the one passing the grid test.

    Returns (scheme, verdicts) with verdicts mapping each candidate nu to
    its grid outcome; raises if no candidate passes (a derivation bug).
    """
    cands = sorted({(mu + 1) // 2, (mu + 2) // 2})
    verdicts = {}
    chosen = None
    for nu in cands:
        scheme = derive_scheme(mu, nu)
        ok = stability_grid_ok(scheme)
        verdicts[nu] = ok
        if ok and chosen is None:
            chosen = scheme
    if chosen is None:
        raise RuntimeError(f"no A-stable GAM candidate found for mu={mu}")
    return chosen, verdicts

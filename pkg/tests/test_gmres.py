"""Restarted GMRES: correctness, counting, histories, complex path."""

import numpy as np
import pytest

from fracbvm import (GmresConfig, UsageError, full_gmres_iteration_count,
                     gmres_solve)


def _random_spd_shifted(rng, n, shift=2.0):
    A = rng.standard_normal((n, n))
    return A @ A.T / n + shift * np.eye(n)


def test_solves_to_requested_tolerance(rng):
    A = _random_spd_shifted(rng, 60)
    b = rng.standard_normal(60)
    x, rep = gmres_solve(lambda v: A @ v, None, b,
                         config=GmresConfig(rel_tol=1e-10))
    assert rep.converged
    assert np.linalg.norm(b - A @ x) <= 1e-10 * np.linalg.norm(b) * 10


def test_left_preconditioning_stops_on_preconditioned_residual(rng):
    n = 50
    A = _random_spd_shifted(rng, n)
    D = np.diag(rng.uniform(0.5, 5.0, n))
    b = rng.standard_normal(n)
    Pinv = np.linalg.inv(D @ A @ D)  # strong preconditioner for DAD
    M = D @ A @ D
    x, rep = gmres_solve(lambda v: M @ v, lambda v: Pinv @ v, b,
                         config=GmresConfig(rel_tol=1e-9))
    assert rep.converged
    pres = np.linalg.norm(Pinv @ (b - M @ x))
    pres0 = np.linalg.norm(Pinv @ b)
    assert pres <= 1e-9 * pres0 * 10
    assert rep.iterations <= 3  # nearly exact preconditioner


def test_iteration_count_includes_all_inner_steps(rng):
    A = _random_spd_shifted(rng, 40, shift=0.3)
    b = rng.standard_normal(40)
    _, rep = gmres_solve(lambda v: A @ v, None, b,
                         config=GmresConfig(restart=5, rel_tol=1e-10))
    assert rep.iterations > 5  # forced through restarts
    assert rep.restarts >= 1
    assert len(rep.residual_history) == rep.iterations + 1


def test_history_matches_recomputed_preconditioned_residual(rng):
    A = _random_spd_shifted(rng, 30)
    b = rng.standard_normal(30)
    _, rep = gmres_solve(lambda v: A @ v, None, b,
                         config=GmresConfig(rel_tol=1e-10, track_true=True))
    # the rotation estimate must track the recomputed residual to rounding
    np.testing.assert_allclose(rep.residual_history,
                               rep.precond_recomputed_history,
                               rtol=1e-8, atol=1e-14 * rep.r0_norm)
    assert rep.true_residual_history[0] == pytest.approx(np.linalg.norm(b))
    assert rep.residual_history[0] == pytest.approx(rep.r0_norm)
    # monotone within a cycle is not guaranteed after restart, but the
    # final entries must sit below tolerance
    assert rep.residual_history[-1] <= 1e-10 * rep.r0_norm


def test_zero_rhs_short_circuits():
    x, rep = gmres_solve(lambda v: v, None, np.zeros(12))
    assert rep.converged and rep.iterations == 0
    np.testing.assert_allclose(x, 0.0)


def test_nonzero_initial_guess(rng):
    A = _random_spd_shifted(rng, 25)
    xstar = rng.standard_normal(25)
    b = A @ xstar
    x, rep = gmres_solve(lambda v: A @ v, None, b, x0=xstar.copy(),
                         config=GmresConfig(rel_tol=1e-12))
    assert rep.converged
    assert rep.iterations == 0 or rep.residual_history[0] < 1e-10


def test_happy_breakdown_on_low_degree_krylov(rng):
    # b an eigenvector: Krylov space is one-dimensional
    n = 20
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.linspace(1.0, 3.0, n)
    A = Q @ np.diag(lam) @ Q.T
    b = Q[:, 4]
    x, rep = gmres_solve(lambda v: A @ v, None, b,
                         config=GmresConfig(rel_tol=1e-12))
    assert rep.converged and rep.iterations == 1


def test_complex_path_matches_dense(rng):
    n = 33
    A = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    A += n * np.eye(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x, rep = gmres_solve(lambda v: A @ v, None, b,
                         config=GmresConfig(rel_tol=1e-12, restart=40))
    assert rep.converged
    np.testing.assert_allclose(x, np.linalg.solve(A, b), rtol=1e-8, atol=1e-10)


def test_full_mode_never_restarts(rng):
    A = _random_spd_shifted(rng, 35, shift=0.05)
    b = rng.standard_normal(35)
    its = full_gmres_iteration_count(lambda v: A @ v, None, b, rel_tol=1e-12)
    assert its <= 35
    _, rep = gmres_solve(lambda v: A @ v, None, b,
                         config=GmresConfig(restart=35, rel_tol=1e-12,
                                            mode="full"))
    assert rep.restarts == 0


def test_max_iterations_reported_unconverged(rng):
    A = _random_spd_shifted(rng, 40, shift=0.01)
    b = rng.standard_normal(40)
    _, rep = gmres_solve(lambda v: A @ v, None, b,
                         config=GmresConfig(rel_tol=1e-14, restart=2,
                                            max_total_iters=6))
    assert not rep.converged
    assert rep.iterations == 6


def test_config_validation():
    with pytest.raises(UsageError):
        GmresConfig(restart=0)
    with pytest.raises(UsageError):
        GmresConfig(rel_tol=0.0)
    with pytest.raises(UsageError):
        GmresConfig(mode="flexible")


def test_benchmark_cell_iteration_regression():
    # frozen end-to-end counts for one benchmark cell per preconditioner
    from fracbvm import run_example1
    expected = {"none": 83, "strang": 8, "bccb": 15, "bccb-mod": 19}
    for kind, count in expected.items():
        row = run_example1(1.2, 24, 16, kind)
        assert row.converged
        assert row.iterations == count, (kind, row.iterations)

"""Constrained least squares baseline tests.

Oracles: exact recovery on consistent data, stationarity of the normal
equations restricted to the constraint null space, and a brute grid
search over a one-dimensional feasible family.
"""

import numpy as np
import pytest

import rbtlse.rb_core as rb
from rbtlse.dense_kernels import qr_full
from rbtlse.errors import AssumptionViolated
from rbtlse.lse_baseline import lse_solve_real, lse_solve_complex
from rbtlse.tlse_real import TlseRealProblem, solve_real


def _rand_rb(rng, m, n):
    return rb.RBMatrix(*(rng.standard_normal((m, n)) for _ in range(4)))


def test_consistent_recovery_real():
    rng = np.random.default_rng(0)
    m, n, p, d = 30, 10, 2, 2
    A = _rand_rb(rng, m, n)
    C = _rand_rb(rng, p, n)
    Xs = rng.standard_normal((n, d))
    Xrb = rb.RBMatrix.from_real(Xs)
    B = rb.mat_mul(A, Xrb)
    D = rb.mat_mul(C, Xrb)
    sol = lse_solve_real(A, B, C, D)
    assert np.linalg.norm(sol.X - Xs) <= 1e-9 * np.linalg.norm(Xs)
    assert sol.residual <= 1e-9
    assert sol.constraint_residual <= 1e-9


def test_consistent_recovery_complex():
    rng = np.random.default_rng(1)
    m, n, p, d = 30, 8, 2, 2
    A = _rand_rb(rng, m, n)
    C = _rand_rb(rng, p, n)
    Zs = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    Zrb = rb.RBMatrix.from_complex(Zs)
    B = rb.mat_mul(A, Zrb)
    D = rb.mat_mul(C, Zrb)
    sol = lse_solve_complex(A, B, C, D)
    assert np.linalg.norm(sol.X - Zs) <= 1e-9 * np.linalg.norm(Zs)
    assert sol.constraint_residual <= 1e-9


def test_constraint_exactly_satisfied_on_noisy_data():
    rng = np.random.default_rng(2)
    m, n, p, d = 30, 10, 2, 2
    A, B = _rand_rb(rng, m, n), _rand_rb(rng, m, d)
    C, D = _rand_rb(rng, p, n), _rand_rb(rng, p, d)
    sol = lse_solve_real(A, B, C, D)
    scale = rb.frobenius_norm(D) + 1
    assert sol.constraint_residual <= 1e-10 * scale


def test_kkt_stationarity_real():
    """The least squares gradient must vanish on the constraint null
    space: Q2^T A_r^T (A_r X - B_r) = 0."""
    rng = np.random.default_rng(3)
    m, n, p, d = 30, 10, 2, 2
    A, B = _rand_rb(rng, m, n), _rand_rb(rng, m, d)
    C, D = _rand_rb(rng, p, n), _rand_rb(rng, p, d)
    sol = lse_solve_real(A, B, C, D)
    Ar = rb.real_block_column(A)
    Br = rb.real_block_column(B)
    Cr = rb.real_block_column(C)
    Q2 = qr_full(Cr.T).Q[:, 4 * p:]
    grad = Q2.T @ Ar.T @ (Ar @ sol.X - Br)
    scale = np.linalg.norm(Ar) * np.linalg.norm(Br) + 1
    assert np.linalg.norm(grad) <= 1e-9 * scale


def test_unconstrained_path_is_least_squares():
    rng = np.random.default_rng(4)
    m, n, d = 20, 6, 2
    A, B = _rand_rb(rng, m, n), _rand_rb(rng, m, d)
    C = rb.RBMatrix.zeros(0, n)
    D = rb.RBMatrix.zeros(0, d)
    sol = lse_solve_real(A, B, C, D)
    Ar = rb.real_block_column(A)
    Br = rb.real_block_column(B)
    want, *_ = np.linalg.lstsq(Ar, Br, rcond=None)
    assert np.allclose(sol.X, want, atol=1e-10)
    # normal equations hold
    assert np.linalg.norm(Ar.T @ (Ar @ sol.X - Br)) <= 1e-9 * np.linalg.norm(Br)


def test_grid_search_minimality_1d():
    """n - 4p = 1: the feasible set is a line X0 + N t; brute-force the
    parabola and compare with the solver."""
    rng = np.random.default_rng(5)
    m, n, p, d = 12, 5, 1, 1
    A, B = _rand_rb(rng, m, n), _rand_rb(rng, m, d)
    C, D = _rand_rb(rng, p, n), _rand_rb(rng, p, d)
    sol = lse_solve_real(A, B, C, D)
    Ar = rb.real_block_column(A)
    Br = rb.real_block_column(B)
    Cr = rb.real_block_column(C)
    N = qr_full(Cr.T).Q[:, 4 * p:]          # (n, 1)
    obj_solver = np.linalg.norm(Ar @ sol.X - Br)
    # analytic minimizer along the line through the solver's point
    g = Ar @ N                                # (4m, 1)
    t_star = float((g.T @ (Br - Ar @ sol.X)).item() / (g.T @ g).item())
    assert abs(t_star) <= 1e-9               # already at the minimum
    for t in np.linspace(-2.0, 2.0, 401):
        obj = np.linalg.norm(Ar @ (sol.X + N * t) - Br)
        assert obj >= obj_solver * (1 - 1e-8)


def test_agrees_with_tlse_on_consistent_data():
    rng = np.random.default_rng(6)
    m, n, p, d = 30, 10, 2, 2
    A = _rand_rb(rng, m, n)
    C = _rand_rb(rng, p, n)
    Xs = rng.standard_normal((n, d))
    Xrb = rb.RBMatrix.from_real(Xs)
    B = rb.mat_mul(A, Xrb)
    D = rb.mat_mul(C, Xrb)
    x_lse = lse_solve_real(A, B, C, D).X
    x_tlse = solve_real(TlseRealProblem(A=A, B=B, C=C, D=D)).X
    assert np.linalg.norm(x_lse - x_tlse) <= 1e-8 * np.linalg.norm(Xs)


def test_rank_deficient_constraint_rejected():
    rng = np.random.default_rng(7)
    A, B = _rand_rb(rng, 20, 8), _rand_rb(rng, 20, 2)
    with pytest.raises(AssumptionViolated):
        lse_solve_real(A, B, rb.RBMatrix.zeros(1, 8), rb.RBMatrix.zeros(1, 2))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wumetric.errors import ConvergenceError, NotSpanningError
from wumetric.generators import random_hermitian_form, random_invertible, random_structured
from wumetric.hermitian import HermitianForm, SubspaceBasis, complex_gaussian, gram_eval_many
from wumetric.mvee import SolverOptions, mvee_finite, mvee_seminorm, worst_violation
from wumetric.seminorm import (
    MaxAbsFunctionals,
    MaxCombination,
    ProductMax,
    ScaledEuclidean,
    boundary_sample,
)

TOL = 1e-6
seeds = st.integers(0, 2**32 - 1)


def example0(eps=0.5):
    return MaxCombination((ScaledEuclidean(1.0, 2), MaxAbsFunctionals(np.array([[1 / eps, 0.0]]))))


def polydisc():
    return ProductMax(ScaledEuclidean(1.0, 1), ScaledEuclidean(1.0, 1))


def diagonal_grid_oracle(sup_quad, grid=20001):
    """Best diag(a, b) by brute force: for each a on a grid take the largest b
    with sup_quad(a, b) <= 1 (sup_quad is increasing in b), keep the largest a*b."""
    best = (0.0, 0.0, 0.0)
    for a in np.linspace(1e-4, 20.0, grid):
        lo, hi = 0.0, 50.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if sup_quad(a, mid) <= 1.0 else (lo, mid)
        if a * lo > best[0]:
            best = (a * lo, a, lo)
    return np.diag([best[1], best[2]])


def torus_points(k=8):
    t = 2 * np.pi * np.arange(k) / k
    return np.array([[np.exp(1j * a), np.exp(1j * b)] for a in t for b in t])


# mvee_finite


def test_canonical_basis_gives_identity():
    S, cert = mvee_finite(np.eye(2), TOL)
    assert np.allclose(S.matrix, np.eye(2), atol=1e-10)
    assert cert.dual_gap <= 2 * TOL


def test_polydisc_torus_matches_grid_oracle():
    P = torus_points()
    # on the torus |x1| = |x2| = 1, so x* diag(a, b) x = a + b at every point
    want = diagonal_grid_oracle(lambda a, b: a + b, grid=4001)
    S, _ = mvee_finite(P, 1e-9)
    assert np.max(np.abs(S.matrix - want)) < 1e-4
    assert np.allclose(S.matrix, np.diag([0.5, 0.5]), atol=1e-8)


def test_sphere_samples_approach_identity():
    rng = np.random.default_rng(7)
    P = complex_gaussian(rng, (200, 3))
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    S, _ = mvee_finite(P, TOL)
    assert np.max(np.abs(S.matrix - np.eye(3))) < 5e-2


def test_non_spanning_points_rejected():
    with pytest.raises(NotSpanningError):
        mvee_finite(np.array([[1, 0], [2, 0], [1j, 0]]), TOL)


def test_iteration_cap():
    rng = np.random.default_rng(0)
    P = complex_gaussian(rng, (50, 3))
    with pytest.raises(ConvergenceError):
        mvee_finite(P, 1e-9, max_iter=5, polish_after=0)


def test_tol_range_checked():
    with pytest.raises(ValueError):
        mvee_finite(np.eye(2), 0.0)


def test_finite_solve_is_deterministic():
    rng = np.random.default_rng(3)
    P = complex_gaussian(rng, (30, 2))
    a, _ = mvee_finite(P, TOL)
    b, _ = mvee_finite(P, TOL)
    assert np.array_equal(a.matrix, b.matrix)


@given(seeds, st.integers(1, 4), st.integers(0, 40))
def test_certificate_invariants(seed, m, extra):
    rng = np.random.default_rng(seed)
    P = complex_gaussian(rng, (m + extra, m))
    S, cert = mvee_finite(P, TOL)
    M = cert.design_matrix()
    assert np.allclose(S.matrix, np.linalg.inv(M) / m, atol=1e-8 * max(1.0, np.max(np.abs(S.matrix))))
    g = cert.leverages()
    assert cert.dual_gap >= -1e-10
    assert cert.dual_gap <= m * TOL
    assert cert.dual_gap == pytest.approx(np.max(g) - m, abs=1e-9)
    assert np.sum(cert.weights) == pytest.approx(1.0, abs=1e-12)
    assert np.all(cert.weights >= 0)
    # complex trace identity sum_i w_i x_i* M^-1 x_i = m
    assert float(cert.weights @ g) == pytest.approx(m, abs=1e-10)
    assert np.max(gram_eval_many(S, P) ** 2) <= 1 + TOL


@given(seeds, st.integers(1, 3))
def test_challengers_do_not_beat_the_solution(seed, m):
    rng = np.random.default_rng(seed)
    P = complex_gaussian(rng, (6 * m, m))
    S, _ = mvee_finite(P, TOL)
    det = np.prod(S.eigenvalues)
    for _ in range(50):
        C = random_hermitian_form(m, rng).matrix
        C = C / np.max(np.einsum("ij,jk,ik->i", P.conj(), C, P).real)
        assert np.linalg.det(C).real <= det * (1 + m * TOL)


@given(seeds, st.integers(1, 3))
def test_equivariance_of_finite_solve(seed, m):
    rng = np.random.default_rng(seed)
    P = complex_gaussian(rng, (5 * m, m))
    L = random_invertible(m, rng)
    tol = 1e-9
    S, _ = mvee_finite(P, tol)
    SL, _ = mvee_finite(np.linalg.solve(L, P.T).T, tol)
    assert np.max(np.abs(SL.matrix - L.conj().T @ S.matrix @ L)) <= 10 * TOL


@given(seeds, st.integers(1, 3))
def test_phase_invariance(seed, m):
    rng = np.random.default_rng(seed)
    P = complex_gaussian(rng, (5 * m, m))
    phases = np.exp(2j * np.pi * rng.uniform(size=len(P)))
    a, _ = mvee_finite(P, 1e-9)
    b, _ = mvee_finite(P * phases[:, None], 1e-9)
    assert np.max(np.abs(a.matrix - b.matrix)) <= 10 * TOL


# worst_violation


def test_worst_violation_sphere():
    _, v = worst_violation(ScaledEuclidean(1.0, 2), HermitianForm(np.eye(2)), SubspaceBasis.canonical(2))
    assert v == pytest.approx(1.0, abs=1e-12)


def test_worst_violation_polydisc_corner():
    h = MaxAbsFunctionals(np.eye(2))
    x, v = worst_violation(h, HermitianForm(np.eye(2)), SubspaceBasis.canonical(2))
    assert v == pytest.approx(math.sqrt(2), abs=1e-8)
    assert np.allclose(np.abs(x), [1, 1], atol=1e-6)


def test_worst_violation_example0_contact():
    x, v = worst_violation(example0(), HermitianForm(np.diag([2, 2 / 3])), SubspaceBasis.canonical(2))
    assert v == pytest.approx(1.0, abs=1e-8)
    assert np.allclose(np.abs(x), [0.5, math.sqrt(3) / 2], atol=1e-4)


def test_worst_violation_is_a_lower_bound():
    rng = np.random.default_rng(0)
    h = random_structured(3, rng)
    S = random_hermitian_form(3, rng)
    U = SubspaceBasis.canonical(3)
    x, v = worst_violation(h, S, U, seed=1)
    assert h(x) == pytest.approx(1.0, abs=1e-9)
    pts = boundary_sample(h, h.decomposition.U, 2000, seed=2)
    assert v >= np.max(gram_eval_many(S, pts)) - 1e-9


# mvee_seminorm


def test_euclidean_gives_identity():
    S, cert = mvee_seminorm(ScaledEuclidean(1.0, 2), TOL)
    assert np.allclose(S.matrix, np.eye(2), atol=1e-8) and cert.certified


def test_example0_matches_lagrange_and_grid_oracles():
    eps = 0.5
    # sup over the ball {||x|| <= 1, |x1| <= eps} of a|x1|^2 + b|x2|^2 is max(b, a eps^2 + b (1 - eps^2))
    grid = diagonal_grid_oracle(lambda a, b: max(b, a * eps**2 + b * (1 - eps**2)), grid=4001)
    lagrange = np.diag([1 / (2 * eps**2), 1 / (2 * (1 - eps**2))])
    assert np.max(np.abs(grid - lagrange)) < 1e-2
    S, cert = mvee_seminorm(example0(eps), TOL)
    assert np.max(np.abs(S.matrix - lagrange)) < 1e-3
    assert cert.certified


def test_polydisc_gives_half_identity():
    S, _ = mvee_seminorm(polydisc(), TOL)
    assert np.max(np.abs(S.matrix - 0.5 * np.eye(2))) < 1e-3


def test_degenerate_seminorm_solved_on_its_support():
    h = MaxAbsFunctionals(np.array([[1.0, 0.0]]))
    S, cert = mvee_seminorm(h, TOL)
    assert S.dim == 1 and S.carrier.dim == 1
    assert np.allclose(S.matrix, [[1.0]], atol=1e-9)


def test_zero_seminorm_gives_empty_form():
    h = MaxAbsFunctionals(np.zeros((1, 2)))
    S, cert = mvee_seminorm(h, TOL)
    assert S.dim == 0 and cert.certified


def test_budget_exhaustion_flags_uncertified():
    S, cert = mvee_seminorm(example0(), TOL, budget=1, options=SolverOptions(initial_points=4))
    assert not cert.certified
    assert cert.dual_gap > 2 * TOL


@settings(settings.get_profile("solver"))
@given(seeds, st.integers(1, 3))
def test_containment_after_certified_solve(seed, n):
    rng = np.random.default_rng(seed)
    h = random_structured(n, rng)
    kd = h.decomposition
    S, cert = mvee_seminorm(h, TOL, seed=seed)
    if kd.m == 0 or not cert.certified:
        return
    pts = boundary_sample(h, kd.U, 1000, seed=seed + 1)
    assert np.max(gram_eval_many(S, pts)) <= 1 + 2 * TOL
    assert cert.dual_gap <= kd.m * TOL


@settings(settings.get_profile("solver"))
@given(seeds, st.integers(2, 3))
def test_seed_independence(seed, n):
    rng = np.random.default_rng(seed)
    h = random_structured(n, rng)
    a, _ = mvee_seminorm(h, TOL, seed=0)
    b, _ = mvee_seminorm(h, TOL, seed=1)
    A = a.ambient_matrix() if a.dim else np.zeros((n, n))
    B = b.ambient_matrix() if b.dim else np.zeros((n, n))
    assert np.max(np.abs(A - B)) <= 10 * TOL

"""Acceptance checks reproducing the worked examples, shared by the test suite and the CLI.

Every check returns :class:`Row` records carrying the measured value, the
expected value and the tolerance it is judged against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .busemann import HomogeneousFunction, busemann_seminorm
from .fields import ex1_field, ex3_field, remark_field, scan
from .generators import (
    cyclic_unitary,
    random_hermitian_norm,
    random_invertible,
    random_structured,
    symmetrized_max_abs,
)
from .hermitian import complex_gaussian, ellipsoid_volume
from .seminorm import (
    MaxAbsFunctionals,
    MaxCombination,
    ProductMax,
    ScaledEuclidean,
    Seminorm,
)
from .wu import DEFAULT_TOL, wu_form, pullback


@dataclass(frozen=True)
class Row:
    criterion: int
    name: str
    measured: float
    expected: str
    tolerance: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.criterion:>2} {self.name}: measured={self.measured:.9g} "
                f"expected={self.expected} tol={self.tolerance:.3g}")


def _unit_rows(rng, count: int, n: int) -> np.ndarray:
    X = complex_gaussian(rng, (count, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _geps(eps: float) -> Seminorm:
    return MaxCombination((ScaledEuclidean(1.0, 2), MaxAbsFunctionals(np.array([[1.0 / eps, 0.0]]))))


def _is_norm(h: Seminorm) -> bool:
    return h.decomposition.V.dim == 0


def euclidean_fixed_point(tol=DEFAULT_TOL, seed=0):
    rows = []
    for n in range(1, 5):
        r = wu_form(ScaledEuclidean(1.0, n), tol, seed)
        err = max(abs(r(e) - math.sqrt(n)) for e in np.eye(n))
        rows.append(Row(1, f"W||.|| on C^{n} at basis vectors", math.sqrt(n) + err,
                        f"sqrt({n})", 1e-5, err <= 1e-5))
    return rows


def example0_pair(tol=DEFAULT_TOL, seed=0):
    X = np.array([0.0, 1.0])
    ball = wu_form(ScaledEuclidean(1.0, 2), tol, seed)(X)
    rows = [Row(2, "W kappa_B2(0;(0,1))", ball, "sqrt(2)", 1e-5, abs(ball - math.sqrt(2)) <= 1e-5)]
    for eps in (0.3, 0.5, 0.6):
        v = wu_form(_geps(eps), tol, seed)(X)
        want = 1.0 / math.sqrt(1.0 - eps**2)
        rows.append(Row(2, f"W kappa_G(0;(0,1)), eps={eps}", v, f"{want:.9g}", 1e-3,
                        abs(v - want) <= 1e-3))
        rows.append(Row(2, f"sqrt(2) - W kappa_G, eps={eps}", ball - v, "> 0", 0.0, ball > v))
    return rows


def mvee_correctness(tol=DEFAULT_TOL, seed=0):
    rng = np.random.default_rng(seed)
    rows = []
    gaps = []
    worst = 0.0
    for _ in range(20):
        h = random_hermitian_norm(int(rng.integers(1, 4)), rng)
        r = wu_form(h, tol, seed)
        gaps.append((r.certificate.dual_gap, r.m, r.certified))
        worst = max(worst, float(np.max(np.abs(r.core_form.ambient_matrix() - h.matrix))))
    rows.append(Row(3, "Hermitian fixed point, max entry error (20 forms)", worst, "0",
                    10 * tol, worst <= 10 * tol))
    poly = wu_form(ProductMax(ScaledEuclidean(1.0, 1), ScaledEuclidean(1.0, 1)), tol, seed)
    gaps.append((poly.certificate.dual_gap, poly.m, poly.certified))
    err = float(np.max(np.abs(poly.core_form.ambient_matrix() - 0.5 * np.eye(2))))
    rows.append(Row(3, "polydisc core form vs diag(1/2,1/2)", err, "0", 1e-3, err <= 1e-3))
    diff = 0.0
    for _ in range(5):
        h = random_structured(int(rng.integers(2, 4)), rng)
        a = wu_form(h, tol, seed)
        b = wu_form(h, tol, seed + 1)
        gaps += [(a.certificate.dual_gap, a.m, a.certified), (b.certificate.dual_gap, b.m, b.certified)]
        diff = max(diff, float(np.max(np.abs(a.unnormalized_form.matrix - b.unnormalized_form.matrix))))
    rows.append(Row(3, "seed independence, max entry difference", diff, "0", 10 * tol, diff <= 10 * tol))
    excess = max(g - m * tol for g, m, c in gaps if c) if any(c for *_, c in gaps) else 0.0
    all_cert = all(c for *_, c in gaps)
    rows.append(Row(3, "dual gap minus m*tol over certified solves", excess, "<= 0", 0.0,
                    excess <= 0 and all_cert))
    return rows


def sandwich(tol=DEFAULT_TOL, seed=0, count=200, vectors=50):
    rng = np.random.default_rng(seed + 4)
    lo = hi = -math.inf
    for _ in range(count):
        n = int(rng.integers(1, 4))
        h = random_structured(n, rng)
        r = wu_form(h, tol, seed)
        X = _unit_rows(rng, vectors, n)
        hv = h.eval_many(X)
        wv = r.norm_many(X)
        lo = max(lo, float(np.max(hv - wv)))
        hi = max(hi, float(np.max(wv - math.sqrt(r.m) * hv)))
    worst = max(lo, hi)
    return [Row(4, f"h <= Wh <= sqrt(m) h, worst excess ({count} seminorms)", worst, "<= 0",
                5 * tol, worst <= 5 * tol)]


def product_formula(tol=DEFAULT_TOL, seed=0, count=20):
    rng = np.random.default_rng(seed + 5)
    worst = 0.0
    for _ in range(count):
        n1, n2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        h1, h2 = random_hermitian_norm(n1, rng), random_hermitian_norm(n2, rng)
        s = wu_form(ProductMax(h1, h2), tol, seed).normalized_form.matrix
        s1 = wu_form(h1, tol, seed).normalized_form.matrix
        s2 = wu_form(h2, tol, seed).normalized_form.matrix
        block = np.zeros_like(s)
        block[:n1, :n1] = s1
        block[n1:, n1:] = s2
        worst = max(worst, float(np.max(np.abs(s - block))))
    return [Row(5, "s-hat of max(h1,h2) vs direct sum, max entry error", worst, "0",
                10 * tol, worst <= 10 * tol)]


def example1_scan(tol=DEFAULT_TOL, seed=0):
    seq = [(1.0 / k, 0.0) for k in range(1, 41)]
    rep = scan(ex1_field(0.5), seq, (0.0, 0.0), (0.0, 1.0), tol, seed)
    want = math.sqrt(2) - 2 / math.sqrt(3)
    return [
        Row(6, "Example 1 usc gap", rep.usc_gap, f"{want:.9g}", 1e-3,
            rep.usc_violation and abs(rep.usc_gap - want) <= 1e-3),
    ]


def example3_scan(tol=DEFAULT_TOL, seed=0):
    seq = [(1.0 / k, 0.0) for k in range(1, 41)]
    rep = scan(ex3_field(0.3, 8.0), seq, (0.0, 0.0), (0.0, 1.0), tol, seed)
    tail = max(rep.values[len(rep.values) // 2:])
    bound = math.sqrt(2) / 8
    return [
        Row(7, "Example 3 lsc flag (gap)", rep.lsc_gap, "> 0 (flagged)", rep.tolerance, rep.lsc_violation),
        Row(7, "Example 3 tail max", tail, f"<= {bound:.9g}", 1e-6, tail <= bound + 1e-6),
        Row(7, "Example 3 limit value", rep.limit_value, ">= 0.3", 1e-6, rep.limit_value >= 0.3 - 1e-6),
    ]


def remark_contrast(tol=DEFAULT_TOL, seed=0):
    f = remark_field(2, 1)
    seq = [(1.0 / k, 0.0, 0.0) for k in range(1, 41)]
    z0, X = (0.0, 0.0, 0.0), (0.0, 0.0, 1.0)
    raw = scan(f, seq, z0, X, tol, seed, normalized=False)
    norm = scan(f, seq, z0, X, tol, seed)
    sq = np.array(raw.values) ** 2
    err_seq = float(np.max(np.abs(sq - 0.5)))
    err_lim = abs(raw.limit_value**2 - 1 / 3)
    wn = np.array(norm.values + [norm.limit_value])
    err_w = float(np.max(np.abs(wn - 1.0)))
    return [
        Row(8, "unnormalized squared values along the sequence", 0.5 + err_seq, "1/2", 1e-3, err_seq <= 1e-3),
        Row(8, "unnormalized squared limit value", raw.limit_value**2, "1/3", 1e-3, err_lim <= 1e-3),
        Row(8, "usc flag for the unnormalized variant (gap)", raw.usc_gap, "> 0 (flagged)",
            raw.tolerance, raw.usc_violation),
        Row(8, "normalized values, max deviation from 1", err_w, "0 (no flag)", 1e-3,
            err_w <= 1e-3 and not norm.usc_violation and not norm.lsc_violation),
    ]


def equivariance_symmetry(tol=DEFAULT_TOL, seed=0, count=20):
    rng = np.random.default_rng(seed + 9)
    worst_eq = 0.0
    done = 0
    while done < count:
        n = int(rng.integers(1, 4))
        h = random_structured(n, rng)
        if not _is_norm(h):
            continue
        L = random_invertible(n, rng)
        S = wu_form(h, tol, seed).core_form.ambient_matrix()
        SL = wu_form(pullback(h, L), tol, seed).core_form.ambient_matrix()
        worst_eq = max(worst_eq, float(np.max(np.abs(SL - L.conj().T @ S @ L))))
        done += 1
    worst_sym = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 4))
        order = int(rng.integers(2, 5))
        L = cyclic_unitary(n, order, rng)
        h = symmetrized_max_abs(L, order, rng)
        if not _is_norm(h):
            h = MaxCombination((h, ScaledEuclidean(0.5, n)))
        S = wu_form(h, tol, seed).core_form.ambient_matrix()
        worst_sym = max(worst_sym, float(np.max(np.abs(L.conj().T @ S @ L - S))))
    return [
        Row(9, "pullback core form vs L* S L, max entry error", worst_eq, "0", 10 * tol, worst_eq <= 10 * tol),
        Row(9, "unitary symmetry L* S L - S, max entry", worst_sym, "0", 10 * tol, worst_sym <= 10 * tol),
    ]


def volume_continuity(tol=DEFAULT_TOL, seed=0, count=20):
    rng = np.random.default_rng(seed + 10)
    worst = -math.inf
    for i in range(count):
        n = int(rng.integers(1, 4))
        h = MaxCombination((ScaledEuclidean(1.0, n), random_structured(n, rng)))
        phi = float(rng.uniform(0.01, 0.3))
        if i % 2 == 0:
            other = MaxCombination((h, ScaledEuclidean(1.0 + phi, n)))
            lip = phi
        else:
            factor = 1.0 + phi
            other = MaxCombination(tuple(_scaled_parts(h, factor)))
            # |(1+phi) h - h| <= phi * sup_{||X||=1} h, bounded by a sampled sup plus margin
            X = np.vstack([np.eye(n), _unit_rows(rng, 4000, n)])
            lip = phi * float(np.max(h.eval_many(X))) * (1 + 1e-2)
        v1 = ellipsoid_volume(wu_form(h, tol, seed).core_form)
        v2 = ellipsoid_volume(wu_form(other, tol, seed).core_form)
        env = (1.0 + lip) ** (2 * n) * (1 + 10 * tol)
        worst = max(worst, v1 / (env * v2), v2 / (env * v1))
    return [Row(10, "max volume ratio / envelope (<= 1)", worst, "<= 1", 0.0, worst <= 1.0)]


def _scaled_parts(h: MaxCombination, factor: float):
    """Parts of ``factor * h`` for a max of structured seminorms."""
    from .wu import pullback as _pb
    n = h.dim
    return [_pb(p, factor * np.eye(n)) for p in h.parts]


def busemann_checks(tol=DEFAULT_TOL, seed=0, directions=2000):
    rng = np.random.default_rng(seed + 11)
    rows = []
    X = complex_gaussian(rng, (1000, 2))
    Y = complex_gaussian(rng, (1000, 2))
    nx, ny = np.linalg.norm(X, axis=1), np.linalg.norm(Y, axis=1)
    for name, f in (("Example 0 form (eps=1/2)", _geps(0.5)), ("Euclidean norm on C^2", ScaledEuclidean(1.0, 2))):
        b = busemann_seminorm(f, directions, seed)
        rel = float(np.max(np.abs(b.eval_many(X) / f.eval_many(X) - 1.0)))
        rows.append(Row(11, f"Busemann of {name}, max relative error", rel, "0", 2e-2, rel <= 2e-2))
    slabs = HomogeneousFunction(
        None, 2, batch_evaluator=lambda Z: 2 * np.minimum(np.abs(Z[:, 0]), np.abs(Z[:, 1])))
    b = busemann_seminorm(slabs, directions, seed)
    v = float(np.max(b.eval_many(X) / nx))
    rows.append(Row(11, "Busemann of min of two slabs, max value / ||X||", v, "0", 2e-2, v <= 2e-2))

    def spiky(Z):
        out = np.linalg.norm(Z, axis=1)
        out[np.abs(Z[:, 1]) <= 1e-14 * np.maximum(out, 1e-300)] = 0.0
        return out

    f = HomogeneousFunction(None, 2, batch_evaluator=spiky)
    b = busemann_seminorm(f, directions, seed)
    Z = np.vstack([X, [[1.0, 0.0], [2j, 0.0]]])
    dom = float(np.max((b.eval_many(Z) - f.eval_many(Z)) / np.linalg.norm(Z, axis=1)))
    rows.append(Row(11, "Busemann domination excess (axis-collapsed norm)", dom, "<= 0", 2e-2, dom <= 2e-2))
    g = busemann_seminorm(_geps(0.5), directions, seed)
    tri = float(np.max((g.eval_many(X + Y) - g.eval_many(X) - g.eval_many(Y)) / (nx + ny)))
    rows.append(Row(11, "Busemann triangle inequality excess", tri, "<= 0", 2e-2, tri <= 2e-2))
    return rows


CRITERIA: dict[int, Callable] = {
    1: euclidean_fixed_point,
    2: example0_pair,
    3: mvee_correctness,
    4: sandwich,
    5: product_formula,
    6: example1_scan,
    7: example3_scan,
    8: remark_contrast,
    9: equivariance_symmetry,
    10: volume_continuity,
    11: busemann_checks,
}


def run_all(tol: float = DEFAULT_TOL, seed: int = 0, only=None) -> list[Row]:
    rows = []
    for k, fn in CRITERIA.items():
        if only is None or k in only:
            rows.extend(fn(tol=tol, seed=seed))
    return rows

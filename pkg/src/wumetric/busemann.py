"""Largest C-seminorm below an absolutely homogeneous function.

The seminorm is the Minkowski gauge of the convex hull of the sampled
indicatrix ``{f < 1}``. Directions on which ``f`` vanishes are recession
directions of the hull and become the kernel of the result. Hulls are built
in the realification of the complement of that kernel: facet inequalities
from qhull when the real dimension is at most 4, a linear program per query
above that.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .errors import AdmissionError, DimensionError, InvariantError
from .hermitian import SubspaceBasis, complex_gaussian, ortho_complement
from .seminorm import BlackBox, Seminorm

log = logging.getLogger(__name__)

MAX_DIM = 4
PHASES = 8
ZERO_TOL = 1e-12
# values above this on the unit sphere are treated as "unbounded"
UNBOUNDED = 1e8
SAMPLING_RTOL = 2e-2
DOMINATION_CHECKS = 1000
REFINE_ROUNDS = 4
REFINE_TOL = 5e-3
_CHUNK = 256


@dataclass(frozen=True, eq=False)
class HomogeneousFunction:
    """A nonnegative function with ``f(tX) = |t| f(X)``, checked on random samples."""

    evaluator: Callable
    dim: int
    batch_evaluator: Callable | None = None
    rtol: float = 1e-9
    checks: int = 16
    check_seed: int = field(default=0, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dimension must be positive")
        if self.checks > 0:
            rng = np.random.default_rng(self.check_seed)
            X = complex_gaussian(rng, (self.checks, self.dim))
            t = complex_gaussian(rng, self.checks)
            fx = self.eval_many(X)
            ftx = self.eval_many(t[:, None] * X)
            slack = self.rtol * np.abs(t) * np.maximum(fx, np.linalg.norm(X, axis=1))
            if np.any(np.abs(ftx - np.abs(t) * fx) > slack):
                raise AdmissionError("function is not absolutely homogeneous")

    def eval_many(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if X.shape[-1] != self.dim:
            raise DimensionError(f"vectors of dimension {X.shape[-1]} for a function on C^{self.dim}")
        if self.batch_evaluator is not None:
            out = np.asarray(self.batch_evaluator(X), dtype=float)
        else:
            out = np.array([float(self.evaluator(x)) for x in X])
        if np.any(out < 0) or np.any(np.isnan(out)):
            raise InvariantError("function returned a negative or undefined value")
        return out

    def __call__(self, x) -> float:
        return float(self.eval_many(np.asarray(x, dtype=complex)[None, :])[0])

    @classmethod
    def from_seminorm(cls, h: Seminorm) -> "HomogeneousFunction":
        return cls(h, h.dim, batch_evaluator=h.eval_many)


def _realify_rows(Y: np.ndarray) -> np.ndarray:
    return np.hstack([Y.real, Y.imag])


def sample_directions(n: int, directions: int, seed: int) -> np.ndarray:
    """Basis vectors then ``directions`` random unit vectors of C^n, one per row.

    The random part of a larger request extends the smaller one (same seed),
    so hulls built from more directions contain those built from fewer.
    """
    rng = np.random.default_rng(seed)
    D = complex_gaussian(rng, (directions, n))
    D /= np.linalg.norm(D, axis=1, keepdims=True)
    return np.vstack([np.eye(n, dtype=complex), D])


class _FacetGauge:
    def __init__(self, pts: np.ndarray):
        hull = ConvexHull(pts)
        eq = hull.equations
        b = -eq[:, -1]
        if np.min(b) <= 1e-12:
            raise InvariantError("sampled hull does not contain the origin in its interior")
        self.A = eq[:, :-1] / b[:, None]
        self.centroids = pts[hull.simplices].mean(axis=1)

    def __call__(self, Y: np.ndarray) -> np.ndarray:
        out = np.empty(len(Y))
        for i in range(0, len(Y), _CHUNK):
            out[i:i + _CHUNK] = np.max(Y[i:i + _CHUNK] @ self.A.T, axis=1)
        return np.maximum(out, 0.0)


class _LinprogGauge:
    def __init__(self, pts: np.ndarray):
        self.P = pts.T

    def __call__(self, Y: np.ndarray) -> np.ndarray:
        k = self.P.shape[1]
        out = np.empty(len(Y))
        for i, y in enumerate(Y):
            if not np.any(y):
                out[i] = 0.0
                continue
            res = linprog(np.ones(k), A_eq=self.P, b_eq=y, bounds=(0, None), method="highs")
            if res.status != 0:
                raise InvariantError("gauge linear program failed: " + res.message)
            out[i] = res.fun
        return out


@dataclass(frozen=True, eq=False)
class BusemannModel:
    """Diagnostics of a sampled convexification."""

    kernel: SubspaceBasis
    points: int
    sup_on_sphere: float
    domination_excess: float


def _boundary_points(D: np.ndarray, vals: np.ndarray, Wc: np.ndarray) -> np.ndarray:
    """Realified W-coordinates of ``e^{i pi k/4} d / f(d)`` for every row d."""
    phases = np.exp(1j * np.pi * np.arange(PHASES) / 4)
    P = D / vals[:, None]
    P = (P[:, None, :] * phases[None, :, None]).reshape(-1, D.shape[1])
    return _realify_rows(P @ Wc)


def busemann_seminorm(f: HomogeneousFunction | Seminorm, directions: int = 2000, seed: int = 0,
                      *, refine: int = REFINE_ROUNDS, return_model: bool = False):
    """Gauge of the convex hull of the sampled indicatrix of ``f``, as a :class:`BlackBox`.

    With ``refine > 0`` (and a hull of real dimension at most 4), each round
    evaluates ``f`` at facet centroids and adds the boundary point above every
    centroid where the hull falls short of the indicatrix by more than
    ``REFINE_TOL``. ``refine=0`` keeps the plain sample, whose hulls are nested
    in ``directions``.
    """
    if isinstance(f, Seminorm):
        f = HomogeneousFunction.from_seminorm(f)
    n = f.dim
    if n > MAX_DIM:
        raise DimensionError(f"convex hulls are only computed up to C^{MAX_DIM}")
    if directions < 4 * n:
        raise ValueError(f"need at least {4 * n} directions")
    D = sample_directions(n, directions, seed)
    vals = f.eval_many(D)
    top = float(np.max(vals))
    if not np.isfinite(top) or top > UNBOUNDED:
        raise InvariantError("function is not locally bounded on the unit sphere")
    zero = vals <= ZERO_TOL
    kernel = SubspaceBasis.from_spanning(D[zero].T, n) if np.any(zero) else SubspaceBasis.empty(n)
    W = ortho_complement(kernel)
    k = W.dim
    Wc = W.vectors.conj()
    added = 0
    if k == 0:
        gauge = None
    else:
        keep = ~zero
        pts = _boundary_points(D[keep], vals[keep], Wc)
        if 2 * k > 4:
            gauge = _LinprogGauge(pts)
        else:
            gauge = _FacetGauge(pts)
            for _ in range(refine):
                Y = gauge.centroids
                C = (Y[:, :k] + 1j * Y[:, k:]) @ W.vectors.T
                fc = f.eval_many(C)
                short = np.flatnonzero(fc < 1.0 - REFINE_TOL)
                if not short.size:
                    break
                # deepest shortfalls first, at most half the base sample per round
                short = short[np.argsort(fc[short])[: max(directions // 2, 1)]]
                Cs = C[short] / np.linalg.norm(C[short], axis=1, keepdims=True)
                pts = np.vstack([pts, _boundary_points(Cs, f.eval_many(Cs), Wc)])
                added += int(short.size)
                gauge = _FacetGauge(pts)
    def batch(X):
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if gauge is None:
            return np.zeros(len(X))
        return gauge(_realify_rows(X @ Wc))

    h = BlackBox(
        evaluator=lambda x: float(batch(np.asarray(x)[None, :])[0]),
        dim=n,
        declared_kernel=kernel,
        batch_evaluator=batch,
        rtol=SAMPLING_RTOL,
        # sampling error is reported through the domination excess instead
        checks=0,
    )
    rng = np.random.default_rng([seed, 1])
    checks = DOMINATION_CHECKS if k <= 2 else DOMINATION_CHECKS // 10
    X = complex_gaussian(rng, (checks, n))
    excess = float(np.max((h.eval_many(X) - f.eval_many(X)) / np.linalg.norm(X, axis=1)))
    if excess > SAMPLING_RTOL:
        log.warning("sampled gauge exceeds the function by %.3e relative; add directions", excess)
    log.debug("busemann: %d + %d directions, kernel dim %d, excess %.2e",
              len(D), added, kernel.dim, excess)
    if return_model:
        return h, BusemannModel(kernel, len(D) + added, top, excess)
    return h

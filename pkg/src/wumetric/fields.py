"""Metric fields on domains, their Wu fields, and semicontinuity scans.

A field assigns to each point z a seminorm (or an absolutely homogeneous
function, which is first convexified). The model values used here are the
closed forms at the centers of the ball, the polydisc and the truncated ball
``{z in B_2 : |z_1| < eps}``; the Example-3-type field is a synthetic stand-in
built only from the inequalities the counterexample needs, not the metric of
an actual domain.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .busemann import HomogeneousFunction, busemann_seminorm
from .errors import DimensionError, InvariantError, UnsupportedPointError
from .hermitian import as_vector, complex_gaussian
from .seminorm import (
    HermitianQ,
    MaxAbsFunctionals,
    MaxCombination,
    ProductMax,
    ScaledEuclidean,
    Seminorm,
)
from .wu import DEFAULT_TOL, WuResult, wu_form

CENTER_ATOL = 1e-12
MIN_SEQUENCE = 20


@dataclass(frozen=True)
class Ball:
    n: int
    radius: float = 1.0


@dataclass(frozen=True)
class GEps:
    """``{z in B_2 : |z_1| < eps}``."""

    eps: float


@dataclass(frozen=True)
class Polydisc:
    n: int


@dataclass(frozen=True)
class Ex1Field:
    """``||X||`` off the origin and ``max(||X||, |X_1|/eps)`` at it; ``control`` uses ``||X||`` everywhere."""

    eps: float
    control: bool = False


@dataclass(frozen=True)
class Ex3Synthetic:
    """Stand-in field near ``z0 = (0, z2)`` in C^2.

    At ``z0`` the value is ``c ||X||``; at points ``(w, z2)`` with ``w != 0``
    (the approach line) it is ``max(|X_2|/R, delta ||X||)``; elsewhere ``c ||X||``.
    """

    c: float
    R: float
    delta: float = 1e-2
    z2: complex = 0.0


@dataclass(frozen=True)
class RemarkField:
    """Product field on C^k x C: a rank-``rank_along`` form on the first factor
    away from ``w = 0`` and the full-rank identity at ``w = 0``, times ``|.|``."""

    k: int = 2
    rank_along: int = 1


Descriptor = Union[Ball, GEps, Polydisc, Ex1Field, Ex3Synthetic, RemarkField]
Assigned = Union[Seminorm, HomogeneousFunction]


def _polydisc(n: int) -> Seminorm:
    if n == 1:
        return ScaledEuclidean(1.0, 1)
    return ProductMax(ScaledEuclidean(1.0, 1), _polydisc(n - 1))


def _geps(eps: float) -> Seminorm:
    return MaxCombination((ScaledEuclidean(1.0, 2), MaxAbsFunctionals(np.array([[1.0 / eps, 0.0]]))))


def _at_center(z, n: int) -> bool:
    return float(np.max(np.abs(as_vector(z, n)), initial=0.0)) <= CENTER_ATOL


def kobayashi_model(descriptor: Descriptor, z) -> Seminorm:
    """Closed-form infinitesimal Kobayashi metric at the center of a model domain."""
    if isinstance(descriptor, Ball):
        if _at_center(z, descriptor.n):
            return ScaledEuclidean(1.0 / descriptor.radius, descriptor.n)
    elif isinstance(descriptor, GEps):
        if _at_center(z, 2):
            return _geps(descriptor.eps)
    elif isinstance(descriptor, Polydisc):
        if _at_center(z, descriptor.n):
            return _polydisc(descriptor.n)
    else:
        raise UnsupportedPointError(f"no model metric for {type(descriptor).__name__}")
    raise UnsupportedPointError("model metrics are only available at the center")


@dataclass(frozen=True, eq=False)
class MetricField:
    """A pointwise assignment ``z -> eta(z; .)`` on C^dim."""

    descriptor: Descriptor | None
    dim: int
    assign: Callable[[np.ndarray], Assigned]
    name: str = ""

    def __call__(self, z) -> Assigned:
        h = self.assign(as_vector(z, self.dim))
        if h.dim != self.dim:
            raise DimensionError(f"field assigned a seminorm on C^{h.dim}")
        return h

    def local_bound(self, z, samples: int = 100, seed: int = 0) -> float:
        """Sampled ``M`` with ``eta(z; X) <= M ||X||`` on random unit X."""
        h = self(z)
        rng = np.random.default_rng(seed)
        X = complex_gaussian(rng, (samples, self.dim))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        X = np.vstack([np.eye(self.dim), X])
        return float(np.max(h.eval_many(X)))


def model_field(descriptor: Descriptor) -> MetricField:
    """The field of a descriptor. Balls give the constant (translated) model value;
    GEps and polydiscs are only defined at their center."""
    if isinstance(descriptor, Ball):
        h = ScaledEuclidean(1.0 / descriptor.radius, descriptor.n)
        return MetricField(descriptor, descriptor.n, lambda z: h, "ball")
    if isinstance(descriptor, (GEps, Polydisc)):
        n = 2 if isinstance(descriptor, GEps) else descriptor.n
        return MetricField(descriptor, n, lambda z: kobayashi_model(descriptor, z),
                           type(descriptor).__name__.lower())
    if isinstance(descriptor, Ex1Field):
        return ex1_field(descriptor.eps, descriptor.control)
    if isinstance(descriptor, Ex3Synthetic):
        return ex3_field(descriptor.c, descriptor.R, descriptor.delta, descriptor.z2)
    if isinstance(descriptor, RemarkField):
        return remark_field(descriptor.k, descriptor.rank_along)
    raise TypeError(f"unknown descriptor {descriptor!r}")


def ex1_field(eps: float, control: bool = False) -> MetricField:
    if not 0 < eps < 1:
        raise InvariantError("eps must lie in (0, 1)")
    away = ScaledEuclidean(1.0, 2)
    at0 = away if control else _geps(eps)
    return MetricField(Ex1Field(eps, control), 2,
                       lambda z: at0 if _at_center(z, 2) else away, "ex1")


def ex3_field(c: float, R: float, delta: float = 1e-2, z2: complex = 0.0) -> MetricField:
    """Synthetic field with ``W eta <= sqrt(2)/R`` along the approach line and ``>= c`` at ``z0``."""
    if not c > 0:
        raise InvariantError("c must be positive")
    if not R > math.sqrt(2) / c:
        raise InvariantError(f"need R > sqrt(2)/c = {math.sqrt(2) / c:.6g}")
    if not 0 < delta <= 1.0 / R:
        raise InvariantError("delta must lie in (0, 1/R]")
    far = ScaledEuclidean(c, 2)
    near = MaxCombination((MaxAbsFunctionals(np.array([[0.0, 1.0 / R]])), ScaledEuclidean(delta, 2)))

    def assign(z):
        if abs(z[1] - z2) <= CENTER_ATOL and abs(z[0]) > CENTER_ATOL:
            return near
        return far

    return MetricField(Ex3Synthetic(c, R, delta, z2), 2, assign, "ex3")


def remark_field(k: int = 2, rank_along: int = 1) -> MetricField:
    if not 1 <= rank_along < k:
        raise InvariantError("rank along the sequence must lie in [1, k)")
    lam = np.zeros(k)
    lam[:rank_along] = 1.0
    disc = ScaledEuclidean(1.0, 1)
    along = ProductMax(HermitianQ(np.diag(lam)), disc)
    limit = ProductMax(HermitianQ(np.eye(k)), disc)

    def assign(z):
        return limit if _at_center(z[:k], k) else along

    return MetricField(RemarkField(k, rank_along), k + 1, assign, "remark")


def convexified(h: Assigned, directions: int = 2000, seed: int = 0) -> Seminorm:
    """The Busemann seminorm of ``h``; structured seminorms are already convex."""
    if isinstance(h, Seminorm):
        return h
    return busemann_seminorm(h, directions, seed)


def wu_at(field: MetricField, z, tol: float = DEFAULT_TOL, seed: int = 0,
          directions: int = 2000) -> WuResult:
    return wu_form(convexified(field(z), directions, seed), tol, seed)


def wu_field(field: MetricField, z, X, tol: float = DEFAULT_TOL, seed: int = 0,
             normalized: bool = True, directions: int = 2000) -> float:
    """``(W eta)(z; X)``, or the unnormalized variant when ``normalized`` is False."""
    r = wu_at(field, z, tol, seed, directions)
    return r(X) if normalized else r.unnormalized(X)


@dataclass(frozen=True)
class ScanReport:
    points: list
    values: list
    limit_value: float
    limsup_estimate: float
    liminf_estimate: float
    tolerance: float
    usc_violation: bool = field(init=False)
    usc_gap: float = field(init=False)
    lsc_violation: bool = field(init=False)
    lsc_gap: float = field(init=False)

    def __post_init__(self):
        usc_gap = self.limsup_estimate - self.limit_value
        lsc_gap = self.limit_value - self.liminf_estimate
        object.__setattr__(self, "usc_gap", float(usc_gap))
        object.__setattr__(self, "lsc_gap", float(lsc_gap))
        object.__setattr__(self, "usc_violation", bool(usc_gap > self.tolerance))
        object.__setattr__(self, "lsc_violation", bool(lsc_gap > self.tolerance))


def scan(field: MetricField, sequence: Sequence, z0, X, tol: float = DEFAULT_TOL, seed: int = 0,
         *, normalized: bool = True, directions: int = 2000, workers: int = 1) -> ScanReport:
    """Evaluate the Wu field along ``sequence -> z0`` and flag semicontinuity failures.

    limsup and liminf are estimated on the tail half of the sequence; the
    flags use the tolerance ``10 * tol``.
    """
    pts = [as_vector(z, field.dim) for z in sequence]
    if len(pts) < MIN_SEQUENCE:
        raise ValueError(f"sequences need at least {MIN_SEQUENCE} points")
    z0 = as_vector(z0, field.dim)
    X = as_vector(X, field.dim)
    # fields hand out shared seminorm objects; solve each distinct one once
    cache: dict[int, WuResult] = {}
    assigned = [field(z) for z in pts] + [field(z0)]
    distinct = list({id(h): h for h in assigned}.values())

    def solve(h):
        return wu_form(convexified(h, directions, seed), tol, seed)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(solve, distinct))
    else:
        results = [solve(h) for h in distinct]
    for h, r in zip(distinct, results):
        cache[id(h)] = r

    def value(h):
        r = cache[id(h)]
        return r(X) if normalized else r.unnormalized(X)

    values = [value(h) for h in assigned[:-1]]
    limit = value(assigned[-1])
    tail = values[len(values) // 2:]
    return ScanReport(pts, values, limit, max(tail), min(tail), 10 * tol)

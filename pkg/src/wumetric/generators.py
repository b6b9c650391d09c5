"""Seeded random seminorms, maps and symmetric families for property checks."""

from __future__ import annotations

import numpy as np

from .hermitian import HermitianForm, complex_gaussian
from .seminorm import (
    HermitianQ,
    MaxAbsFunctionals,
    MaxCombination,
    ProductMax,
    ScaledEuclidean,
    Seminorm,
)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_invertible(n: int, rng: np.random.Generator, spread: float = 2.0) -> np.ndarray:
    """``Q1 diag(s) Q2`` with singular values in ``[1/spread, spread]``."""
    s = np.exp(rng.uniform(-np.log(spread), np.log(spread), n))
    return random_unitary(n, rng) @ np.diag(s) @ random_unitary(n, rng)


def random_hermitian_form(n: int, rng: np.random.Generator, lo: float = 0.1, hi: float = 4.0,
                          rank: int | None = None) -> HermitianForm:
    lam = rng.uniform(lo, hi, n)
    if rank is not None:
        lam[rank:] = 0.0
    Q = random_unitary(n, rng)
    return HermitianForm((Q * lam) @ Q.conj().T)


def random_hermitian_norm(n: int, rng: np.random.Generator, **kw) -> HermitianQ:
    return HermitianQ(random_hermitian_form(n, rng, **kw))


def random_max_abs(n: int, rng: np.random.Generator, k: int | None = None) -> MaxAbsFunctionals:
    k = k if k is not None else int(rng.integers(1, n + 3))
    a = complex_gaussian(rng, (k, n))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    a *= rng.uniform(0.5, 2.0, (k, 1))
    return MaxAbsFunctionals(a)


def random_structured(n: int, rng: np.random.Generator, depth: int = 0) -> Seminorm:
    """A random seminorm of one of the structured kinds, possibly degenerate."""
    kinds = ["euclidean", "hermitian", "max_abs", "max"]
    if n >= 2 and depth < 2:
        kinds.append("product")
    if depth >= 2:
        kinds.remove("max")
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "euclidean":
        return ScaledEuclidean(float(rng.uniform(0.5, 2.0)), n)
    if kind == "hermitian":
        rank = int(rng.integers(1, n + 1))
        return HermitianQ(random_hermitian_form(n, rng, rank=rank))
    if kind == "max_abs":
        return random_max_abs(n, rng)
    if kind == "max":
        return MaxCombination(tuple(random_structured(n, rng, depth + 1) for _ in range(2)))
    n1 = int(rng.integers(1, n))
    return ProductMax(random_structured(n1, rng, depth + 1), random_structured(n - n1, rng, depth + 1))


def cyclic_unitary(n: int, order: int, rng: np.random.Generator) -> np.ndarray:
    """A random unitary L with ``L**order = I``."""
    Q = random_unitary(n, rng)
    k = rng.integers(0, order, n)
    return (Q * np.exp(2j * np.pi * k / order)) @ Q.conj().T


def symmetrized_max_abs(L: np.ndarray, order: int, rng: np.random.Generator,
                        k: int | None = None) -> MaxAbsFunctionals:
    """A max-of-moduli norm invariant under ``X -> L X`` (L of finite ``order``)."""
    n = L.shape[0]
    k = k or n
    base = complex_gaussian(rng, (k, n))
    base /= np.linalg.norm(base, axis=1, keepdims=True)
    rows = []
    Lh = L.conj().T
    a = base.T
    for _ in range(order):
        rows.append(a.T)
        a = Lh @ a
    # invariance: h(LX) = max |<X, L* a>|, and {L* a} permutes the orbit
    return MaxAbsFunctionals(np.vstack(rows))

"""Structured complex seminorms, their kernels, and boundary points of the unit ball."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import AdmissionError, DimensionError, InvariantError
from .hermitian import (
    PSD_RTOL,
    HermitianForm,
    SubspaceBasis,
    as_vector,
    complex_gaussian,
    null_space,
    ortho_complement,
)

KERNEL_ATOL = 1e-9
_CHECK_SAMPLES = 100


class Seminorm:
    """Base class: a C-seminorm on C^dim.

    Subclasses implement :meth:`eval_many` on a stack of row vectors and
    :meth:`_kernel`, the subspace on which the seminorm vanishes.
    """

    dim: int

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _kernel(self) -> SubspaceBasis:
        raise NotImplementedError

    def pieces(self) -> list[np.ndarray] | None:
        """PSD matrices A_k with ``h(X)**2 = max_k X* A_k X``, or None for black boxes."""
        return None

    def __call__(self, x) -> float:
        return eval_seminorm(self, x)

    @cached_property
    def decomposition(self) -> "KernelDecomposition":
        return kernel_decomposition(self)


def _stack(X, dim: int) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    if X.shape[-1] != dim:
        raise DimensionError(f"vectors of dimension {X.shape[-1]} for a seminorm on C^{dim}")
    return X


@dataclass(frozen=True, eq=False)
class HermitianQ(Seminorm):
    """``h(X) = sqrt(X* S X)`` for a PSD form S on the whole space."""

    form: HermitianForm

    def __post_init__(self):
        if not isinstance(self.form, HermitianForm):
            object.__setattr__(self, "form", HermitianForm(self.form))
        if self.form.carrier is not None:
            object.__setattr__(self, "form", self.form.extended())

    @property
    def dim(self) -> int:
        return self.form.dim

    @property
    def matrix(self) -> np.ndarray:
        return self.form.matrix

    @cached_property
    def factor(self) -> np.ndarray:
        """F with ``S = F* F``, built from the eigenvectors off the kernel."""
        lam, Q = np.linalg.eigh(self.form.matrix)
        keep = lam > PSD_RTOL * max(float(lam[-1]), 1.0) if lam.size else lam > 0
        return np.sqrt(lam[keep])[:, None] * Q[:, keep].conj().T

    def eval_many(self, X):
        X = _stack(X, self.dim)
        return np.linalg.norm(X @ self.factor.T, axis=1)

    def _kernel(self):
        return null_space(self.form.matrix)

    def pieces(self):
        return [np.array(self.form.matrix)]


@dataclass(frozen=True, eq=False)
class MaxAbsFunctionals(Seminorm):
    """``h(X) = max_j |<X, a_j>|`` with ``<z, w> = sum z_k conj(w_k)``; rows of ``covectors`` are the a_j."""

    covectors: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.covectors, dtype=complex))
        if a.ndim != 2 or a.shape[0] == 0:
            raise DimensionError("need at least one covector")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "covectors", a)

    @property
    def dim(self) -> int:
        return self.covectors.shape[1]

    def eval_many(self, X):
        X = _stack(X, self.dim)
        return np.max(np.abs(X @ self.covectors.conj().T), axis=1)

    def _kernel(self):
        a = self.covectors
        return null_space(a.T @ a.conj())

    def pieces(self):
        return [np.outer(a, a.conj()) for a in self.covectors]


@dataclass(frozen=True, eq=False)
class MaxCombination(Seminorm):
    """Pointwise maximum of seminorms on the same space."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise DimensionError("need at least one part")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise DimensionError(f"parts live on different spaces: {sorted(dims)}")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    def eval_many(self, X):
        X = _stack(X, self.dim)
        return np.max(np.stack([p.eval_many(X) for p in self.parts]), axis=0)

    def _kernel(self):
        n = self.dim
        acc = np.zeros((n, n), dtype=complex)
        for p in self.parts:
            acc += np.eye(n) - p.decomposition.V.projector()
        return null_space(acc)

    def pieces(self):
        out = []
        for p in self.parts:
            sub = p.pieces()
            if sub is None:
                return None
            out.extend(sub)
        return out


@dataclass(frozen=True, eq=False)
class ScaledEuclidean(Seminorm):
    """``h(X) = scale * ||X||``."""

    scale: float
    dim: int

    def __post_init__(self):
        if not self.scale > 0:
            raise InvariantError("scale must be positive")

    def eval_many(self, X):
        return self.scale * np.linalg.norm(_stack(X, self.dim), axis=1)

    def _kernel(self):
        return SubspaceBasis.empty(self.dim)

    def pieces(self):
        return [self.scale**2 * np.eye(self.dim, dtype=complex)]


@dataclass(frozen=True, eq=False)
class ProductMax(Seminorm):
    """``h(X1, X2) = max(h1(X1), h2(X2))`` on C^(n1 + n2)."""

    h1: Seminorm
    h2: Seminorm

    @property
    def dim(self) -> int:
        return self.h1.dim + self.h2.dim

    def eval_many(self, X):
        X = _stack(X, self.dim)
        n1 = self.h1.dim
        return np.maximum(self.h1.eval_many(X[:, :n1]), self.h2.eval_many(X[:, n1:]))

    def _kernel(self):
        n1, n2 = self.h1.dim, self.h2.dim
        v1 = self.h1.decomposition.V.vectors
        v2 = self.h2.decomposition.V.vectors
        vec = np.zeros((n1 + n2, v1.shape[1] + v2.shape[1]), dtype=complex)
        vec[:n1, : v1.shape[1]] = v1
        vec[n1:, v1.shape[1] :] = v2
        return SubspaceBasis(vec, n1 + n2)

    def pieces(self):
        p1, p2 = self.h1.pieces(), self.h2.pieces()
        if p1 is None or p2 is None:
            return None
        n1, n = self.h1.dim, self.dim
        out = []
        for a in p1:
            big = np.zeros((n, n), dtype=complex)
            big[:n1, :n1] = a
            out.append(big)
        for a in p2:
            big = np.zeros((n, n), dtype=complex)
            big[n1:, n1:] = a
            out.append(big)
        return out


@dataclass(frozen=True, eq=False)
class BlackBox(Seminorm):
    """A seminorm given only by an evaluator, with a kernel declared by the caller.

    Construction runs seeded probabilistic checks of absolute homogeneity and
    the triangle inequality; ``rtol`` is relative to the norms of the inputs.
    """

    evaluator: Callable
    dim: int
    declared_kernel: SubspaceBasis | None = None
    batch_evaluator: Callable | None = None
    rtol: float = 1e-9
    checks: int = 16
    check_seed: int = field(default=0, repr=False)

    def __post_init__(self):
        if self.declared_kernel is not None and self.declared_kernel.ambient_dim != self.dim:
            raise DimensionError("declared kernel lives in a different space")
        if self.checks > 0:
            self._admit()

    def eval_many(self, X):
        X = _stack(X, self.dim)
        if self.batch_evaluator is not None:
            out = np.asarray(self.batch_evaluator(X), dtype=float)
        else:
            out = np.array([float(self.evaluator(x)) for x in X])
        if np.any(out < 0) or not np.all(np.isfinite(out)):
            raise InvariantError("black-box evaluator returned a negative or non-finite value")
        return out

    def _kernel(self):
        if self.declared_kernel is None:
            raise InvariantError("black-box seminorm has no declared kernel")
        return self.declared_kernel

    def _admit(self):
        rng = np.random.default_rng(self.check_seed)
        k = self.checks
        X = complex_gaussian(rng, (k, self.dim))
        Y = complex_gaussian(rng, (k, self.dim))
        t = complex_gaussian(rng, k)
        nx = np.linalg.norm(X, axis=1)
        ny = np.linalg.norm(Y, axis=1)
        fx, fy = self.eval_many(X), self.eval_many(Y)
        ftx = self.eval_many(t[:, None] * X)
        fxy = self.eval_many(X + Y)
        if np.any(np.abs(ftx - np.abs(t) * fx) > self.rtol * np.abs(t) * nx):
            raise AdmissionError("black-box evaluator is not absolutely homogeneous")
        if np.any(fxy > fx + fy + self.rtol * (nx + ny)):
            raise AdmissionError("black-box evaluator violates the triangle inequality")


def eval_seminorm(h: Seminorm, X) -> float:
    x = as_vector(X, h.dim)
    return float(h.eval_many(x[None, :])[0])


@dataclass(frozen=True, eq=False)
class KernelDecomposition:
    """``V`` = zero set of h, ``U`` its orthogonal complement, ``lower_bound`` = sampled min of h on unit U."""

    V: SubspaceBasis
    U: SubspaceBasis
    lower_bound: float

    @property
    def m(self) -> int:
        return self.U.dim


def kernel_decomposition(h: Seminorm, seed: int = 0) -> KernelDecomposition:
    V = h._kernel()
    U = ortho_complement(V)
    rng = np.random.default_rng(seed)
    if V.dim:
        on_v = h.eval_many(V.random_unit(rng, _CHECK_SAMPLES))
        if np.max(on_v) > KERNEL_ATOL:
            cls = AdmissionError if isinstance(h, BlackBox) else InvariantError
            raise cls(f"seminorm does not vanish on its kernel (value {np.max(on_v):.3e})")
    lower = 0.0
    if U.dim:
        samples = np.vstack([U.vectors.T, U.random_unit(rng, _CHECK_SAMPLES)])
        lower = float(np.min(h.eval_many(samples)))
        if lower <= KERNEL_ATOL:
            raise InvariantError("seminorm vanishes on the complement of its declared kernel")
    return KernelDecomposition(V, U, lower)


def boundary_point(h: Seminorm, d) -> np.ndarray:
    """The point of the unit sphere of h on the ray through ``d``."""
    d = as_vector(d, h.dim)
    v = h(d)
    if v <= KERNEL_ATOL * np.linalg.norm(d):
        raise InvariantError("seminorm vanishes on the requested direction")
    return d / v


def boundary_sample(h: Seminorm, U: SubspaceBasis, count: int, seed: int) -> np.ndarray:
    """Points ``d / h(d)`` for the basis directions of U and ``count`` random unit directions.

    Rows of the returned array are points of C^n with ``h = 1`` (up to rounding).
    """
    m = U.dim
    if count < 2 * m:
        raise ValueError(f"count must be at least 2 * dim U = {2 * m}")
    rng = np.random.default_rng(seed)
    D = np.vstack([U.vectors.T, U.random_unit(rng, count)])
    vals = h.eval_many(D)
    if np.any(vals <= KERNEL_ATOL):
        raise InvariantError("seminorm vanishes on a sampled direction of U; U is wrong")
    return D / vals[:, None]

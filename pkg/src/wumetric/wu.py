"""The Wu operator on a single seminorm.

``wu_form`` splits off the kernel V(h), solves for the minimal circumscribed
Hermitian ellipsoid on U(h), and scales it by ``m = dim U(h)``. The Wu
seminorm is the square root of the scaled form; ``wu_norm_unnormalized``
drops the factor m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .hermitian import HermitianForm, SubspaceBasis, gram_eval, gram_eval_many
from .mvee import MveeCertificate, SolverOptions, mvee_seminorm
from .seminorm import (
    BlackBox,
    HermitianQ,
    MaxAbsFunctionals,
    MaxCombination,
    ProductMax,
    ScaledEuclidean,
    Seminorm,
)

DEFAULT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class WuResult:
    core_form: HermitianForm
    normalized_form: HermitianForm
    m: int
    kernel: SubspaceBasis
    certificate: MveeCertificate

    @property
    def unnormalized_form(self) -> HermitianForm:
        return self.core_form.extended() if self.m else HermitianForm(
            np.zeros((self.kernel.ambient_dim,) * 2))

    def __call__(self, X) -> float:
        return gram_eval(self.normalized_form, X)

    def norm_many(self, X) -> np.ndarray:
        return gram_eval_many(self.normalized_form, X)

    def unnormalized(self, X) -> float:
        return gram_eval(self.unnormalized_form, X)

    @property
    def certified(self) -> bool:
        return self.certificate.certified


def wu_form(h: Seminorm, tol: float = DEFAULT_TOL, seed: int = 0, *,
            budget: int = 50, options: SolverOptions | None = None) -> WuResult:
    kd = h.decomposition
    n, m = h.dim, kd.m
    core, cert = mvee_seminorm(h, tol=tol, budget=budget, seed=seed, options=options)
    if m == 0:
        normalized = HermitianForm(np.zeros((n, n)))
    else:
        normalized = HermitianForm(m * core.ambient_matrix())
    return WuResult(core, normalized, m, kd.V, cert)


def wu_norm(h: Seminorm, X, tol: float = DEFAULT_TOL, seed: int = 0) -> float:
    """``(W h)(X)``."""
    return wu_form(h, tol, seed)(X)


def wu_norm_unnormalized(h: Seminorm, X, tol: float = DEFAULT_TOL, seed: int = 0) -> float:
    """``q_{s^h}(X)``, the Wu construction without the factor sqrt(m)."""
    return wu_form(h, tol, seed).unnormalized(X)


def pullback(h: Seminorm, L) -> Seminorm:
    """Structured representation of ``X -> h(L X)``."""
    L = np.asarray(L, dtype=complex)
    n = h.dim
    if L.shape != (n, n):
        raise DimensionError(f"map of shape {L.shape} for a seminorm on C^{n}")
    sv = np.linalg.svd(L, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise np.linalg.LinAlgError("pullback needs an invertible map")
    Lh = L.conj().T
    if isinstance(h, HermitianQ):
        return HermitianQ(HermitianForm(Lh @ h.matrix @ L))
    if isinstance(h, ScaledEuclidean):
        return HermitianQ(HermitianForm(h.scale**2 * (Lh @ L)))
    if isinstance(h, MaxAbsFunctionals):
        return MaxAbsFunctionals(h.covectors @ L.conj())
    if isinstance(h, MaxCombination):
        return MaxCombination(tuple(pullback(p, L) for p in h.parts))
    if isinstance(h, ProductMax):
        n1 = h.h1.dim
        if np.allclose(L[:n1, n1:], 0, atol=0) and np.allclose(L[n1:, :n1], 0, atol=0):
            return ProductMax(pullback(h.h1, L[:n1, :n1]), pullback(h.h2, L[n1:, n1:]))
    # generic composition: kernel is L^-1 V(h)
    V = h.decomposition.V
    kernel = SubspaceBasis.from_spanning(np.linalg.solve(L, V.vectors), n)
    return BlackBox(
        evaluator=lambda x: h(L @ x),
        dim=n,
        declared_kernel=kernel,
        batch_evaluator=lambda X: h.eval_many(X @ L.T),
    )

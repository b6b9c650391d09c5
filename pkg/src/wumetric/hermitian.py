"""Small dense complex linear algebra: Hermitian forms, subspaces, ellipsoid volumes.

Vectors are plain ``numpy`` arrays of dtype ``complex128``. Subspaces are stored
as matrices whose columns are an orthonormal basis, so that coordinates with
respect to a carrier are obtained by ``basis.conj().T @ x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvariantError, OffCarrierError

PSD_RTOL = 1e-10
ORTHONORMAL_ATOL = 1e-10
OFF_CARRIER_ATOL = 1e-8


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-d complex array, optionally checking its length."""
    v = np.asarray(x, dtype=complex)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise InvariantError("vector has non-finite entries")
    return v


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis of a subspace of C^n, stored column-wise."""

    vectors: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.size == 0:
            v = np.zeros((self.ambient_dim, 0), dtype=complex)
        if v.ndim != 2 or v.shape[0] != self.ambient_dim:
            raise DimensionError(
                f"basis matrix of shape {v.shape} does not live in C^{self.ambient_dim}"
            )
        gram = v.conj().T @ v
        if not np.allclose(gram, np.eye(v.shape[1]), atol=ORTHONORMAL_ATOL, rtol=0):
            raise InvariantError("subspace basis is not orthonormal")
        object.__setattr__(self, "vectors", _frozen(v))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @classmethod
    def canonical(cls, n: int) -> "SubspaceBasis":
        return cls(np.eye(n, dtype=complex), n)

    @classmethod
    def empty(cls, n: int) -> "SubspaceBasis":
        return cls(np.zeros((n, 0), dtype=complex), n)

    @classmethod
    def from_spanning(cls, vectors, ambient_dim: int, tol: float = 1e-10) -> "SubspaceBasis":
        """Orthonormalize the columns of ``vectors`` (rank-revealing, via SVD)."""
        a = np.asarray(vectors, dtype=complex).reshape(ambient_dim, -1)
        if a.shape[1] == 0:
            return cls.empty(ambient_dim)
        u, sv, _ = np.linalg.svd(a, full_matrices=False)
        if sv.size == 0 or sv[0] == 0:
            return cls.empty(ambient_dim)
        rank = int(np.sum(sv > tol * sv[0]))
        return cls(u[:, :rank], ambient_dim)

    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T

    def coordinates(self, x) -> np.ndarray:
        return self.vectors.conj().T @ np.asarray(x, dtype=complex).T

    def random_unit(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """``count`` rotation-invariant random unit vectors of the subspace, one per row."""
        c = complex_gaussian(rng, (count, self.dim))
        c /= np.linalg.norm(c, axis=1, keepdims=True)
        return c @ self.vectors.T


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    shape = tuple(np.atleast_1d(shape))
    z = rng.standard_normal(shape + (2,))
    return z[..., 0] + 1j * z[..., 1]


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """Positive semidefinite Hermitian form.

    ``matrix`` is expressed in the coordinates of ``carrier`` (an orthonormal
    basis of a subspace of the ambient space); ``carrier=None`` means the form
    lives on the whole ambient space with the canonical basis.
    """

    matrix: np.ndarray
    carrier: SubspaceBasis | None = None
    _eigvals: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
        if a.size == 0:
            a = np.zeros((0, 0), dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"form matrix must be square, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvariantError("form matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if np.max(np.abs(a - a.conj().T), initial=0.0) > 1e-8 * scale:
            raise InvariantError("form matrix is not Hermitian")
        a = 0.5 * (a + a.conj().T)
        if self.carrier is not None and self.carrier.dim != a.shape[0]:
            raise DimensionError(
                f"carrier has dimension {self.carrier.dim}, matrix is {a.shape[0]}x{a.shape[0]}"
            )
        ev = np.linalg.eigvalsh(a) if a.size else np.zeros(0)
        top = max(1.0, float(np.max(np.abs(ev), initial=0.0)))
        if ev.size and ev[0] < -PSD_RTOL * top:
            raise InvariantError(f"form is not positive semidefinite (eigenvalue {ev[0]:.3e})")
        object.__setattr__(self, "matrix", _frozen(a))
        object.__setattr__(self, "_eigvals", ev)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.dim if self.carrier is None else self.carrier.ambient_dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigvals

    def ambient_matrix(self) -> np.ndarray:
        """The form as an n x n matrix on the ambient space (zero off the carrier)."""
        if self.carrier is None:
            return np.array(self.matrix)
        c = self.carrier.vectors
        return c @ self.matrix @ c.conj().T

    def scaled(self, factor: float) -> "HermitianForm":
        return HermitianForm(factor * self.matrix, self.carrier)

    def extended(self) -> "HermitianForm":
        return HermitianForm(self.ambient_matrix())

    def __call__(self, x) -> float:
        return gram_eval(self, x)


def _carrier_coords(S: HermitianForm, X: np.ndarray) -> np.ndarray:
    """Coordinates of the rows of ``X`` on S's carrier, rejecting off-carrier parts."""
    if X.shape[-1] != S.ambient_dim:
        raise DimensionError(f"vector of dimension {X.shape[-1]} for a form on C^{S.ambient_dim}")
    if S.carrier is None:
        return X
    c = S.carrier.vectors
    coords = X @ c.conj()
    off = X - coords @ c.T
    if np.max(np.abs(off), initial=0.0) > OFF_CARRIER_ATOL:
        raise OffCarrierError("vector has a component off the form's carrier")
    return coords


def gram_eval_many(S: HermitianForm, X) -> np.ndarray:
    """Row-wise ``sqrt(x* S x)`` for a stack of vectors of shape (k, n)."""
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    Y = _carrier_coords(S, X)
    quad = np.einsum("ij,jk,ik->i", Y.conj(), S.matrix, Y).real
    scale = np.sum(np.abs(Y) ** 2, axis=1) * max(1.0, float(np.max(np.abs(S.eigenvalues), initial=0.0)))
    if np.any(quad < -PSD_RTOL * np.maximum(scale, 1.0)):
        raise InvariantError("quadratic form is negative; the form is not PSD")
    return np.sqrt(np.clip(quad, 0.0, None))


def gram_eval(S: HermitianForm, X) -> float:
    """``q_S(X) = sqrt(X* S X)``."""
    x = as_vector(X, S.ambient_dim)
    return float(gram_eval_many(S, x[None, :])[0])


def _check_hermitian(A: np.ndarray) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    if np.max(np.abs(A - A.conj().T), initial=0.0) > 1e-8 * scale:
        raise InvariantError("matrix is not Hermitian")
    return 0.5 * (A + A.conj().T)


def null_space(A, tol: float = 1e-10) -> SubspaceBasis:
    """Eigenvectors of a Hermitian PSD matrix with eigenvalue <= tol * (largest eigenvalue)."""
    A = _check_hermitian(A)
    n = A.shape[0]
    if tol <= 0:
        raise ValueError("tol must be positive")
    w, v = np.linalg.eigh(A)
    top = float(np.max(w, initial=0.0))
    cut = tol * top if top > tol else tol
    return SubspaceBasis(v[:, w <= cut], n)


def ortho_complement(V: SubspaceBasis) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement; canonical basis when V is trivial."""
    n = V.ambient_dim
    if V.dim == 0:
        return SubspaceBasis.canonical(n)
    if V.dim == n:
        return SubspaceBasis.empty(n)
    w, vecs = np.linalg.eigh(np.eye(n) - V.projector())
    U = vecs[:, w > 0.5]
    # re-orthogonalize against V to push residual overlap to machine precision
    U = U - V.vectors @ (V.vectors.conj().T @ U)
    q, _ = np.linalg.qr(U)
    return SubspaceBasis(q, n)


def restrict_form(S: HermitianForm, U: SubspaceBasis) -> HermitianForm:
    """The matrix ``(u_j* S u_k)`` of S restricted to span U, carried by U."""
    if U.ambient_dim != S.ambient_dim:
        raise DimensionError(f"subspace of C^{U.ambient_dim} for a form on C^{S.ambient_dim}")
    A = S.ambient_matrix()
    u = U.vectors
    return HermitianForm(u.conj().T @ A @ u, U)


def unit_ball_volume(m: int) -> float:
    """Lebesgue volume of the unit ball of C^m = R^(2m)."""
    return math.pi**m / math.factorial(m)


def ellipsoid_volume(S: HermitianForm, tol: float = PSD_RTOL) -> float:
    """Volume of ``{q_S < 1}`` inside the carrier; ``inf`` for degenerate forms."""
    m = S.dim
    if m == 0:
        return 1.0
    ev = S.eigenvalues
    if ev[0] <= tol * max(1.0, float(ev[-1])):
        return math.inf
    return unit_ball_volume(m) / float(np.prod(ev))


def congruence(S: HermitianForm, L) -> HermitianForm:
    """The pulled-back form ``(X, Y) -> s(LX, LY)``, i.e. matrix ``L* S L``."""
    L = np.asarray(L, dtype=complex)
    A = S.ambient_matrix()
    if L.shape != A.shape:
        raise DimensionError(f"map of shape {L.shape} for a form on C^{A.shape[0]}")
    return HermitianForm(L.conj().T @ A @ L)

"""Minimal-volume centered Hermitian ellipsoids.

The finite problem (maximize ``log det S`` subject to ``x_i* S x_i <= 1``) is
solved on its D-optimal design dual: weights ``w`` on the points,
``M(w) = sum w_i x_i x_i*``, leverages ``g_i = x_i* M^-1 x_i``. At the optimum
``max g = m`` and ``S = M^-1 / m``. Weight moves toward the point of largest
leverage (Khachiyan step) or away from the supported point of smallest
leverage (Todd-Yildirim away step), both with exact line search.

For a seminorm the constraint set is the whole unit sphere of h; a
cutting-plane loop alternates finite solves with a search for the boundary
point of largest ``q_S``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import ConvergenceError, DimensionError, NotSpanningError
from .hermitian import HermitianForm, SubspaceBasis, complex_gaussian
from .seminorm import HermitianQ, ScaledEuclidean, Seminorm, boundary_sample

log = logging.getLogger(__name__)

SPAN_RTOL = 1e-10
_REFRESH = 200


@dataclass(frozen=True, eq=False)
class MveeCertificate:
    """Dual witness: ``S = M(weights)^-1 / m`` and ``dual_gap = max_i g_i - m``."""

    weights: np.ndarray
    support_points: np.ndarray
    dual_gap: float
    iterations: int
    certified: bool = True
    rounds: int = 0

    @property
    def m(self) -> int:
        return self.support_points.shape[1]

    def design_matrix(self) -> np.ndarray:
        P = self.support_points
        return (P.T * self.weights) @ P.conj()

    def leverages(self) -> np.ndarray:
        P = self.support_points
        Minv = np.linalg.inv(self.design_matrix())
        return np.einsum("ij,jk,ik->i", P.conj(), Minv, P).real


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 100_000
    initial_points: int | None = None
    probes: int = 2000
    starts: int = 6
    # the loop keeps cutting until the gap is below m * tol * refine; certification needs m * tol
    refine: float = 1e-3
    # a certificate is only accepted after a wider search finds nothing
    audit_starts: int = 40
    audit_probes: int = 8000


def _leverages(P: np.ndarray, Minv: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", P.conj(), Minv, P).real


def _design(P: np.ndarray, w: np.ndarray) -> np.ndarray:
    return (P.T * w) @ P.conj()


def _check_points(points) -> np.ndarray:
    P = np.atleast_2d(np.asarray(points, dtype=complex))
    if P.ndim != 2 or P.shape[1] == 0:
        raise DimensionError(f"expected a (count, m) array of points, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise DimensionError("points have non-finite entries")
    m = P.shape[1]
    sv = np.linalg.svd(P, compute_uv=False)
    if P.shape[0] < m or sv[0] == 0 or sv[-1] <= SPAN_RTOL * sv[0]:
        raise NotSpanningError(
            f"points do not span C^{m}; restrict to the subspace they span first"
        )
    return P


def _dual_barrier_polish(P: np.ndarray, w0: np.ndarray, tol: float, max_newton: int = 500):
    """Newton's method on ``log det M(w) + mu * sum(log w)`` over the simplex.

    At the centered point ``g_i = m + N mu - mu / w_i``, so the dual gap is at
    most ``N mu``; mu is decreased tenfold until the gap reaches ``m * tol``.
    """
    n, m = P.shape
    w = 0.9 * np.clip(w0, 0.0, None) / np.sum(w0) + 0.1 / n
    Minv = np.linalg.inv(_design(P, w))
    g = _leverages(P, Minv)
    mu = max(float(np.max(g)) - m, m * tol) / n
    steps = 0

    def phi(v):
        sign, ld = np.linalg.slogdet(_design(P, v))
        return ld + mu * np.sum(np.log(v)) if sign.real > 0 else -np.inf

    while steps < max_newton:
        for _ in range(50):
            steps += 1
            Minv = np.linalg.inv(_design(P, w))
            K = P.conj() @ Minv @ P.T
            g = np.real(np.diag(K))
            grad = g + mu / w
            H = np.abs(K) ** 2 + np.diag(mu / w**2)  # negated Hessian, positive definite
            try:
                cf = scipy.linalg.cho_factor(H)
                y1 = scipy.linalg.cho_solve(cf, grad)
                y2 = scipy.linalg.cho_solve(cf, np.ones(n))
            except np.linalg.LinAlgError:
                y1 = np.linalg.lstsq(H, grad, rcond=None)[0]
                y2 = np.linalg.lstsq(H, np.ones(n), rcond=None)[0]
            nu = y1.sum() / y2.sum()
            d = y1 - nu * y2
            dec = float((grad - nu) @ d)
            if dec < 1e-24:
                break
            neg = d < 0
            s = min(1.0, 0.99 * float(np.min(-w[neg] / d[neg]))) if np.any(neg) else 1.0
            # below ~1e-10 phi cannot resolve the Armijo test; take the damped Newton step
            if dec > 1e-10:
                f0 = phi(w)
                while s > 1e-14 and phi(w + s * d) < f0 + 0.25 * s * dec:
                    s *= 0.5
            w = w + s * d
            w /= w.sum()
            if dec < 1e-20:
                break
        Minv = np.linalg.inv(_design(P, w))
        g = _leverages(P, Minv)
        log.debug("dual barrier mu=%.1e steps=%d gap=%.3e", mu, steps, np.max(g) - m)
        if np.max(g) <= m * (1.0 + tol):
            return w, steps
        mu *= 0.1
    raise ConvergenceError(f"barrier polish did not reach tol={tol:g} in {max_newton} Newton steps")


def mvee_finite(points, tol: float = 1e-6, *, max_iter: int = 100_000, weights0=None,
                polish_after: int = 1000):
    """Minimal-volume Hermitian ellipsoid ``{x* S x <= 1}`` containing ``points``.

    Returns ``(S, certificate)`` with ``x_i* S x_i <= 1 + tol`` and
    ``certificate.dual_gap <= m * tol``. Weight updates that have not
    converged after ``polish_after`` steps are handed to a barrier Newton
    polish (degenerate designs converge sublinearly under first-order steps).
    Raises :class:`NotSpanningError` for degenerate point sets and
    :class:`ConvergenceError` when neither phase converges.
    """
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    P = _check_points(points)
    n, m = P.shape
    if weights0 is None:
        w = np.full(n, 1.0 / n)
    else:
        w = np.asarray(weights0, dtype=float).copy()
        if w.shape != (n,) or np.any(w < 0) or w.sum() <= 0:
            raise ValueError("weights0 must be nonnegative with one entry per point")
        w /= w.sum()
        if np.linalg.matrix_rank(_design(P, w)) < m:
            w = 0.5 * w + 0.5 / n
    Minv = np.linalg.inv(_design(P, w))
    g = _leverages(P, Minv)
    target = m * (1.0 + tol)
    first_order_cap = min(max_iter, polish_after) if polish_after else max_iter
    it = 0
    newton = 0
    while True:
        jp = int(np.argmax(g))
        gmax = g[jp]
        if gmax <= target:
            break
        if it >= first_order_cap:
            if first_order_cap == max_iter and not polish_after:
                raise ConvergenceError(
                    f"finite MVEE solve did not reach tol={tol:g} in {max_iter} iterations "
                    f"(gap {gmax - m:.3e})"
                )
            w, newton = _dual_barrier_polish(P, w, tol)
            break
        supp = np.flatnonzero(w > 0)
        jm = int(supp[np.argmin(g[supp])])
        gmin = g[jm]
        if gmax - m >= m - gmin or supp.size == 1:
            j = jp
            beta = (gmax - m) / (m * (gmax - 1.0))
            a, b = 1.0 - beta, beta
            w *= a
            w[j] += b
        else:
            j = jm
            bmax = w[j] / (1.0 - w[j])
            beta = bmax if gmin <= 1.0 else min((m - gmin) / (m * (gmin - 1.0)), bmax)
            a, b = 1.0 + beta, -beta
            w *= a
            w[j] += b
            if beta == bmax:
                w[j] = 0.0
        it += 1
        # a full step (beta = 1 happens for m = 1) leaves a single support point
        if it % _REFRESH == 0 or a <= 1e-12:
            w = np.clip(w, 0.0, None)
            w /= w.sum()
            Minv = np.linalg.inv(_design(P, w))
            g = _leverages(P, Minv)
            continue
        c = b / a
        u = Minv @ P[j]
        denom = 1.0 + c * g[j]
        Minv = (Minv - (c / denom) * np.outer(u, u.conj())) / a
        v = P.conj() @ u
        g = (g - (c / denom) * np.abs(v) ** 2) / a

    w = np.clip(w, 0.0, None)
    w /= w.sum()
    Minv = np.linalg.inv(_design(P, w))
    Minv = 0.5 * (Minv + Minv.conj().T)
    g = _leverages(P, Minv)
    S = HermitianForm(Minv / m)
    cert = MveeCertificate(
        weights=w, support_points=P, dual_gap=float(np.max(g) - m), iterations=it + newton
    )
    return S, cert


# --- separation oracle -------------------------------------------------------


def _ratio(h: Seminorm, Sc: np.ndarray, U: np.ndarray, C: np.ndarray) -> np.ndarray:
    """``q_S(c) / h(U c)`` for rows c of coordinates."""
    q = np.sqrt(np.clip(np.einsum("ij,jk,ik->i", C.conj(), Sc, C).real, 0.0, None))
    return q / h.eval_many(C @ U.T)


def _orth_chart(c: np.ndarray) -> np.ndarray:
    """Unit complex directions spanning the real tangent space of the sphere mod phase at c."""
    m = c.shape[0]
    q, _ = np.linalg.qr(np.column_stack([c, np.eye(m)]))
    B = q[:, 1:m].T
    return np.vstack([B, 1j * B])


def _pattern_ascent(h, Sc, U, c, rng, n_random=24, s0=0.1, s_min=1e-10, max_steps=3000):
    """Maximize the ratio from ``c`` by batched direct search over chart and random directions."""
    m = c.shape[0]
    f = float(_ratio(h, Sc, U, c[None, :])[0])
    s = s0
    steps = 0
    chart = _orth_chart(c)
    while s > s_min and steps < max_steps:
        steps += 1
        R = complex_gaussian(rng, (n_random, m))
        R -= np.outer(R @ c.conj(), c)
        R /= np.maximum(np.linalg.norm(R, axis=1, keepdims=True), 1e-300)
        dirs = np.vstack([chart, -chart, R])
        cand = c[None, :] + s * dirs
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        r = _ratio(h, Sc, U, cand)
        k = int(np.argmax(r))
        if r[k] > f:
            c, f = cand[k], float(r[k])
            chart = _orth_chart(c)
            s = min(2.0 * s, 0.5)
        else:
            s *= 0.5
    return c, f


def _exact_candidates(h, Sc, U):
    """Generalized eigenvector for seminorms that are themselves Hermitian."""
    if isinstance(h, ScaledEuclidean):
        A0 = h.scale**2 * np.eye(U.shape[1])
    else:
        A0 = U.conj().T @ h.form.matrix @ U
    A0 = 0.5 * (A0 + A0.conj().T)
    vals, vecs = scipy.linalg.eigh(0.5 * (Sc + Sc.conj().T), A0)
    c = vecs[:, -1] / np.linalg.norm(vecs[:, -1])
    return [(c, float(np.sqrt(max(vals[-1], 0.0))))]


def _realify(A: np.ndarray) -> np.ndarray:
    """Real symmetric matrix with ``v.T @ R @ v = c* A c`` for ``v = (Re c, Im c)``."""
    return np.block([[A.real, -A.imag], [A.imag, A.real]])


def _qcqp_ascent(Sr: np.ndarray, Ar: list[np.ndarray], c0: np.ndarray) -> np.ndarray:
    """Local maximizer of ``c* S c`` subject to ``c* A_k c <= 1`` (SLSQP from c0)."""
    m = c0.shape[0]
    v0 = np.concatenate([c0.real, c0.imag])
    cons = [
        {"type": "ineq", "fun": (lambda v, R=R: 1.0 - v @ R @ v), "jac": (lambda v, R=R: -2.0 * R @ v)}
        for R in Ar
    ]
    res = scipy.optimize.minimize(
        lambda v: -(v @ Sr @ v),
        v0,
        jac=lambda v: -2.0 * Sr @ v,
        constraints=cons,
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 300},
    )
    v = res.x
    return v[:m] + 1j * v[m:]


def _candidates(h, Sc, U, probes, starts, seed, warm=()):
    """Local maxima of ``q_S / h`` on span U, best first, as ``(coords, ratio)`` pairs."""
    m = U.shape[1]
    if isinstance(h, (HermitianQ, ScaledEuclidean)):
        return _exact_candidates(h, Sc, U)
    if m == 1:
        c = np.ones(1, dtype=complex)
        return [(c, float(_ratio(h, Sc, U, c[None, :])[0]))]
    rng = np.random.default_rng(seed)
    C = complex_gaussian(rng, (probes, m))
    C /= np.linalg.norm(C, axis=1, keepdims=True)
    C = np.vstack([np.eye(m, dtype=complex), C])
    r = _ratio(h, Sc, U, C)
    order = np.argsort(r)[::-1]
    chosen: list[np.ndarray] = [np.asarray(c, dtype=complex) / np.linalg.norm(c) for c in warm]
    budget = len(chosen) + starts
    for i in order:
        if all(abs(np.vdot(C[i], c)) < 0.98 for c in chosen):
            chosen.append(C[i])
        if len(chosen) >= budget:
            break
    pieces = h.pieces()
    if pieces is not None:
        Ar = [_realify(U.conj().T @ A @ U) for A in pieces]
        Ar = [R for R in Ar if np.max(np.abs(R)) > 0]
        Sr = _realify(Sc)
    found = []
    for c0 in chosen:
        if pieces is not None:
            c0 = c0 / h(U @ c0)
            c = _qcqp_ascent(Sr, Ar, c0)
            if not np.all(np.isfinite(c)) or np.linalg.norm(c) == 0:
                continue
            c = c / np.linalg.norm(c)
            f = float(_ratio(h, Sc, U, c[None, :])[0])
        else:
            c, f = _pattern_ascent(h, Sc, U, c0, rng)
        if all(abs(np.vdot(c, c2)) < 1 - 1e-8 for c2, _ in found):
            found.append((c, f))
    found.sort(key=lambda cf: -cf[1])
    return found


def worst_violation(h: Seminorm, S: HermitianForm, U: SubspaceBasis | None = None,
                    probes: int = 2000, seed: int = 0, starts: int = 6):
    """Boundary point x of the unit ball of h (inside span U) approximately maximizing q_S.

    Returns ``(x, q_S(x))``; the value is a lower bound for the supremum.
    ``S`` must be carried by U (its carrier is used when U is omitted).
    """
    U = U if U is not None else (S.carrier or SubspaceBasis.canonical(S.dim))
    Uv = U.vectors
    Sc = S.matrix if S.carrier is not None else Uv.conj().T @ S.matrix @ Uv
    c, val = _candidates(h, Sc, Uv, probes, starts, seed)[0]
    d = Uv @ c
    return d / h(d), val


# --- cutting-plane loop ------------------------------------------------------


def mvee_seminorm(h: Seminorm, tol: float = 1e-6, budget: int = 50, seed: int = 0,
                  options: SolverOptions | None = None):
    """Minimal Hermitian ellipsoid circumscribing the unit ball of h on U(h).

    Returns ``(S, certificate)`` where S is carried by U(h). When the budget of
    cutting-plane rounds runs out the best form is returned with
    ``certificate.certified = False``.
    """
    opts = options or SolverOptions()
    if budget < 1:
        raise ValueError("budget must be at least 1")
    U = h.decomposition.U
    m = U.dim
    if m == 0:
        empty = np.zeros((0, 0))
        cert = MveeCertificate(np.zeros(0), np.zeros((0, 0), dtype=complex), 0.0, 0)
        return HermitianForm(empty, U), cert
    Uv = U.vectors
    count = opts.initial_points or max(2 * m, 16 * m)
    pts = boundary_sample(h, U, count, seed)
    C = pts @ Uv.conj()
    w0 = None
    iterations = 0
    goal = tol * opts.refine
    inner = 0.1 * goal
    for rnd in range(1, budget + 1):
        Sc, cert = mvee_finite(C, inner, max_iter=opts.max_iter, weights0=w0)
        iterations += cert.iterations
        found = _candidates(h, Sc.matrix, Uv, opts.probes, opts.starts, seed + 7919 * rnd,
                            warm=[c for c, _ in found[:opts.starts]] if rnd > 1 else ())
        worst = found[0][1]
        gap = m * (worst**2 - 1.0)
        log.debug("round %d: %d points, oracle gap %.3e", rnd, C.shape[0], gap)
        new = [c / h(Uv @ c) for c, q in found if q**2 - 1.0 > inner]
        if (gap <= m * goal or not new) and m > 1 and h.pieces() is not None:
            audit = _candidates(h, Sc.matrix, Uv, opts.audit_probes, opts.audit_starts,
                                seed + 104729 * rnd)
            if audit[0][1] > worst:
                found = sorted(found + audit, key=lambda cf: -cf[1])
                worst = found[0][1]
                gap = m * (worst**2 - 1.0)
                new = [c / h(Uv @ c) for c, q in found if q**2 - 1.0 > inner]
        if gap <= m * goal or not new:
            break
        C = np.vstack([C, np.array(new)])
        w0 = np.concatenate([cert.weights, np.zeros(len(new))])
    certified = gap <= m * tol
    c_worst = found[0][0]
    x_worst = c_worst / h(Uv @ c_worst)
    P = np.vstack([cert.support_points, x_worst[None, :]])
    w = np.concatenate([cert.weights, [0.0]])
    final = MveeCertificate(
        weights=w,
        support_points=P,
        dual_gap=float(max(cert.dual_gap, gap)),
        iterations=iterations,
        certified=bool(certified),
        rounds=rnd,
    )
    if not certified:
        log.warning("cutting-plane budget exhausted: gap %.3e > %.3e", gap, m * tol)
    return HermitianForm(Sc.matrix, U), final

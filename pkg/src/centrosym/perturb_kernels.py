"""Eigenvalue-moving primitives.

* :func:`brauer` -- rank-one update ``A + v q'`` along an eigenvector.
* :func:`rado` -- rank-k update along an invariant-subspace frame.
* :func:`dominating_real` -- entrywise-increasing update of a constant row
  sum matrix moving (rho, lambda) to (rho + t, lambda +- t).
* :func:`complex_rank_two` -- two-column update moving a conjugate pair
  a +- ib to a -+ t +- ib, every entry bounded by t.
* :func:`dominating_complex` -- entrywise-increasing rank-three update moving
  a conjugate pair by -+t; the Perron increase is whatever the update needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import InfeasibleError, NumericalFailure, PreconditionError, ShapeError
from .matrix_core import (
    DEFAULT_TOL,
    Tolerance,
    is_exact,
    max_abs,
    min_entry,
    to_float,
    to_fraction,
    zeros_like_mode,
)

__all__ = [
    "EigenPairReal",
    "EigenPairComplex",
    "DominationCertificate",
    "exact_nullspace",
    "real_eigenpair",
    "complex_eigenpair",
    "brauer",
    "rado",
    "dominating_real",
    "complex_rank_two",
    "dominating_complex",
]

_SIGNS = ("plus", "minus")


@dataclass(frozen=True)
class EigenPairReal:
    lam: object
    u: np.ndarray
    residual: float = 0.0


@dataclass(frozen=True)
class EigenPairComplex:
    a: float
    b: float
    u: np.ndarray
    v: np.ndarray
    residual: float = 0.0


@dataclass(frozen=True)
class DominationCertificate:
    min_excess: float
    perron_shift: object
    budget: Optional[float] = None

    @property
    def exceeds_budget(self) -> bool:
        return self.budget is not None and float(self.perron_shift) > self.budget * (1 + 1e-12)


def _check_sign(sign):
    if sign not in _SIGNS:
        raise PreconditionError(f"sign must be 'plus' or 'minus', got {sign!r}")


def _scalar_like(M, t):
    """Coerce a scalar to the arithmetic mode of ``M``."""
    if is_exact(M):
        return to_fraction(t)
    return float(t)


def _inf_norm(M) -> float:
    if M.size == 0:
        return 0.0
    if is_exact(M):
        return float(max(sum(abs(v) for v in row) for row in M.tolist()))
    return float(np.max(np.abs(M).sum(axis=1)))


# -- eigenvectors ------------------------------------------------------------

def exact_nullspace(M) -> list:
    """Basis of the right null space of a rational matrix (Gauss-Jordan)."""
    rows = [[to_fraction(v) for v in row] for row in M.tolist()]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(nr):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nr:
            break
    basis = []
    for free in (c for c in range(nc) if c not in pivots):
        vec = [Fraction(0)] * nc
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][free]
        basis.append(np.array(vec, dtype=object))
    return basis


def _sign_normalize(u):
    """Scale so the largest-magnitude entry equals +1 (ties: smallest index)."""
    mags = np.array([abs(float(v)) for v in u])
    top = mags.max()
    if top == 0:
        raise NumericalFailure("zero eigenvector")
    k = int(np.flatnonzero(mags >= top * (1 - 1e-12))[0])
    out = u / u[k]
    if is_exact(out):
        return out
    # near-ties may leave entries a few ulps beyond 1
    return np.clip(out, -1.0, 1.0)


def real_eigenpair(M, lam, tol: Tolerance = DEFAULT_TOL) -> EigenPairReal:
    """Right eigenvector for a real eigenvalue, largest entry normalized to +1.

    Exact matrices with a rational ``lam`` that is an exact eigenvalue get an
    exact rational vector; otherwise the null vector of ``M - lam I`` comes
    from the SVD.
    """
    n = M.shape[0]
    if is_exact(M):
        try:
            lam_q = to_fraction(lam)
        except PreconditionError:
            lam_q = None
        if lam_q is not None:
            basis = exact_nullspace(M - lam_q * np.eye(n, dtype=int).astype(object))
            if basis:
                u = _sign_normalize(basis[0])
                return EigenPairReal(lam_q, u, 0.0)
    A = to_float(M)
    lam_f = float(lam)
    _, _, vh = np.linalg.svd(A - lam_f * np.eye(n))
    u = _sign_normalize(vh[-1])
    residual = float(np.max(np.abs(A @ u - lam_f * u)))
    bound = 1e-8 * max(1.0, _inf_norm(A))
    if residual > bound:
        raise NumericalFailure(f"{lam_f} is not an eigenvalue (residual {residual:.3g})",
                               residual=residual)
    return EigenPairReal(lam_f, u, residual)


def complex_eigenpair(M, a, b) -> EigenPairComplex:
    """Real and imaginary parts (u, v) of an eigenvector for a + ib, b > 0.

    Works on the real 2n-dimensional form ``[[M - aI, bI], [-bI, M - aI]]``
    whose null space holds ``(u, v)`` with ``M u = a u - b v`` and
    ``M v = b u + a v``.
    """
    A = to_float(M)
    a, b = float(a), float(b)
    if not b > 0:
        raise PreconditionError("complex pair needs b > 0")
    n = A.shape[0]
    I = np.eye(n)
    K = np.block([[A - a * I, b * I], [-b * I, A - a * I]])
    _, _, vh = np.linalg.svd(K)
    z = vh[-1]
    u, v = z[:n], z[n:]
    scale = max(np.max(np.abs(u)), np.max(np.abs(v)))
    u, v = u / scale, v / scale
    r1 = np.max(np.abs(A @ u - (a * u - b * v)))
    r2 = np.max(np.abs(A @ v - (b * u + a * v)))
    residual = float(max(r1, r2))
    if residual > 1e-8 * max(1.0, _inf_norm(A)):
        raise NumericalFailure(f"{a}+{b}i is not an eigenvalue (residual {residual:.3g})",
                               residual=residual)
    if np.linalg.matrix_rank(np.column_stack([u, v]), tol=1e-10) < 2:
        raise NumericalFailure("real and imaginary parts are parallel")
    return EigenPairComplex(a, b, u, v, residual)


# -- Brauer / Rado -----------------------------------------------------------

def brauer(A, v, lambda_k, q, tol: Tolerance = DEFAULT_TOL):
    """``A + v q'``; the eigenvalue ``lambda_k`` of ``v`` moves to ``lambda_k + v'q``."""
    if v.shape != (A.shape[0],) or q.shape != (A.shape[1],):
        raise ShapeError("v and q must match the matrix order")
    res = max_abs(A @ v - v * _scalar_like(A, lambda_k))
    if res > tol.spectral_tol * max(1.0, _inf_norm(A)) * max(1.0, max_abs(v)):
        raise PreconditionError(f"v is not an eigenvector for {lambda_k} (residual {res:.3g})")
    return A + np.outer(v, q)


def rado(A, basis, omega, C_rows, tol: Tolerance = DEFAULT_TOL):
    """Rank-k update along an invariant frame.

    ``basis`` is an n x k frame (or a list of k vectors) with
    ``A basis = basis omega``.  Returns ``(A + basis C_rows,
    omega + C_rows basis)``; the spectrum of the first is that of ``A`` with
    ``sigma(omega)`` replaced by the spectrum of the second.
    """
    X = np.column_stack(basis) if isinstance(basis, (list, tuple)) else basis
    n, k = X.shape
    if A.shape != (n, n) or omega.shape != (k, k) or C_rows.shape != (k, n):
        raise ShapeError("inconsistent shapes for a Rado update")
    res = max_abs(A @ X - X @ omega)
    if res > tol.spectral_tol * max(1.0, _inf_norm(A)) * max(1.0, max_abs(X)):
        raise PreconditionError(f"basis is not an invariant frame (residual {res:.3g})")
    return A + X @ C_rows, omega + C_rows @ X


# -- dominating real update --------------------------------------------------

def _row_sum_check(Y, tol: Tolerance):
    sums = Y.sum(axis=1)
    if is_exact(Y):
        if max(sums) != min(sums):
            raise PreconditionError("Y must have constant row sums")
        return sums[0]
    spread = float(np.max(sums) - np.min(sums))
    if spread > max(tol.structural_tol, 1e-12 * (1.0 + _inf_norm(Y))) * 10:
        raise PreconditionError(f"Y must have constant row sums (spread {spread:.3g})")
    return float(np.mean(sums))


def _dominating_real_update(Y, pair: EigenPairReal, t, sign, tol: Tolerance):
    _check_sign(sign)
    if min_entry(Y) < -tol.structural_tol:
        raise PreconditionError("Y must be nonnegative")
    _row_sum_check(Y, tol)
    n = Y.shape[0]
    t = _scalar_like(Y, t)
    if t < 0:
        raise PreconditionError("t must be nonnegative")
    u = pair.u
    if is_exact(Y) and not is_exact(u):
        Y = to_float(Y)
        t = float(t)
    u = u / max(u) if max(u) > 0 else None
    if u is None:
        raise InfeasibleError("eigenvector has no positive entry")
    k = int(np.argmax([float(v) for v in u]))
    m = int(np.argmin([float(v) for v in u]))
    u_min = u[m]
    if float(1 - u_min) <= 1e-12:
        raise InfeasibleError(
            "eigenvector is parallel to e (defective relative to the Perron vector)"
        )
    tau = t / (1 - u_min)
    e = np.full(n, Fraction(1), dtype=object) if is_exact(u) else np.ones(n)
    # both columns are entrywise >= 0: 0 <= 1 - u_i and 0 <= u_i - u_min
    down = (e - u) * tau
    up = (u - u_min * e) * tau
    U = zeros_like_mode((n, n), is_exact(u))
    if sign == "minus":
        U[:, k] += down
        U[:, m] += up
    else:
        U[:, k] += up
        U[:, m] += down
    return Y, U, t


def dominating_real(Y, pair: EigenPairReal, t, sign: str, tol: Tolerance = DEFAULT_TOL):
    """Return ``(X, certificate)`` with ``X >= Y`` entrywise.

    ``Y`` has constant row sums rho and ``pair`` is a real eigenpair
    (lam, u) with u not parallel to e.  With u scaled to ``max u = 1``,
    ``k = argmax u``, ``m = argmin u`` and ``tau = t / (1 - u_min)``::

        minus: X = Y + tau (e - u) e_k' + tau (u - u_min e) e_m'
        plus:  X = Y + tau (u - u_min e) e_k' + tau (e - u) e_m'

    On span{e, u} the update is upper triangular, so rho -> rho + t and
    lam -> lam -+ t while the rest of the spectrum stays put.
    """
    Y, U, t = _dominating_real_update(Y, pair, t, sign, tol)
    cert = DominationCertificate(min_excess=float(min_entry(U)), perron_shift=t)
    return Y + U, cert


# -- complex pair, two-column update -----------------------------------------

def _complex_rank_two_update(pair: EigenPairComplex, t, tol: Tolerance):
    u, v = pair.u, pair.v
    D = np.outer(u, v) - np.outer(v, u)  # D[i, j] = det(i, j); exactly antisymmetric
    flat = int(np.argmax(D))
    p, q = divmod(flat, D.shape[1])
    delta = float(D[p, q])
    if delta <= tol.structural_tol:
        raise NumericalFailure("u and v are numerically parallel", residual=delta)
    n = u.shape[0]
    U = np.zeros((n, n))
    # |D[i, q]|, |D[p, i]| <= delta, so every entry lies in [-t, t]
    U[:, p] = t * (D[:, q] / delta)
    U[:, q] = t * (D[p, :] / delta)
    return U, p, q, delta


def complex_rank_two(M, pair: EigenPairComplex, t, sign: str, tol: Tolerance = DEFAULT_TOL):
    """Move the pair a +- ib of ``M`` to a -+ t +- ib.

    The update ``U`` has only the two columns (p, q) maximizing
    ``det(p, q) = u_p v_q - u_q v_p`` nonzero, acts as ``t I`` on span{u, v}
    and satisfies ``|U_ij| <= t``.  Returns ``M - U`` (minus) or ``M + U``.
    """
    _check_sign(sign)
    t = float(t)
    if t < 0:
        raise PreconditionError("t must be nonnegative")
    U, _, _, _ = _complex_rank_two_update(pair, t, tol)
    A = to_float(M)
    return A - U if sign == "minus" else A + U


# -- dominating complex update -----------------------------------------------

def _support_chunks(n, chunk=20000):
    """All 3-subsets of range(n) in lexicographic order, in bounded chunks."""
    triples = combinations(range(n), 3)
    while True:
        block = np.array([tr for _, tr in zip(range(chunk), triples)], dtype=int)
        if block.size == 0:
            return
        yield block


def _envelope(u, v, c1, c2):
    P = np.outer(u, c1) + np.outer(v, c2)
    c0 = np.max(-P, axis=0)
    return P + c0[None, :], c0


def _solve_support(V, rhs):
    u, v = V[:, 1], V[:, 2]
    best = None
    for S in _support_chunks(V.shape[0]):
        G = V[S]  # (T, 3, 3): rows are the support indices
        dets = np.linalg.det(G)
        good = np.abs(dets) > 1e-10
        if not np.any(good):
            continue
        S, G, dets = S[good], G[good], dets[good]
        C = np.linalg.solve(np.transpose(G, (0, 2, 1)), np.broadcast_to(rhs, (len(S), 3, 2)))
        P = u[None, :, None] * C[:, None, :, 0] + v[None, :, None] * C[:, None, :, 1]
        shifts = np.max(-P, axis=1).sum(axis=1)
        key = np.round(shifts, 10)
        order = np.lexsort((-np.abs(dets), key))
        i = order[0]
        cand = (float(key[i]), -abs(float(dets[i])), tuple(S[i]), C[i])
        if best is None or cand[:2] < best[:2]:
            best = cand
    if best is None:
        raise InfeasibleError("no 3-column support with nonzero determinant")
    n = V.shape[0]
    c1 = np.zeros(n)
    c2 = np.zeros(n)
    idx = list(best[2])
    c1[idx] = best[3][:, 0]
    c2[idx] = best[3][:, 1]
    return c1, c2


def _solve_lp(V, rhs):
    from scipy.optimize import linprog

    n = V.shape[0]
    u, v = V[:, 1], V[:, 2]
    cost = np.concatenate([np.ones(n), np.zeros(2 * n)])
    rows = []
    for i in range(n):
        blk = np.zeros((n, 3 * n))
        blk[:, :n] = -np.eye(n)
        blk[:, n:2 * n] = -u[i] * np.eye(n)
        blk[:, 2 * n:] = -v[i] * np.eye(n)
        rows.append(blk)
    A_ub = np.vstack(rows)
    A_eq = np.zeros((6, 3 * n))
    A_eq[0:3, n:2 * n] = V.T
    A_eq[3:6, 2 * n:] = V.T
    b_eq = np.concatenate([rhs[:, 0], rhs[:, 1]])
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(n * n), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * (3 * n), method="highs")
    if res.status != 0:
        return None
    c1, c2 = res.x[n:2 * n], res.x[2 * n:]
    # restore the equality constraints to working precision
    G = V.T @ V
    c1 = c1 + V @ np.linalg.solve(G, rhs[:, 0] - V.T @ c1)
    c2 = c2 + V @ np.linalg.solve(G, rhs[:, 1] - V.T @ c2)
    return c1, c2


def _dominating_complex_update(Y, pair: EigenPairComplex, t, sign, tol: Tolerance,
                               method: str = "support"):
    _check_sign(sign)
    Yf = to_float(Y)
    if min_entry(Yf) < -tol.structural_tol:
        raise PreconditionError("Y must be nonnegative")
    _row_sum_check(Yf, tol)
    t = float(t)
    if t < 0:
        raise PreconditionError("t must be nonnegative")
    n = Yf.shape[0]
    if t == 0:
        return Yf, np.zeros((n, n))
    scale = max(np.max(np.abs(pair.u)), np.max(np.abs(pair.v)))
    u, v = pair.u / scale, pair.v / scale
    V = np.column_stack([np.ones(n), u, v])
    if n < 3 or np.linalg.matrix_rank(V, tol=1e-10) < 3:
        raise InfeasibleError("{e, u, v} must be linearly independent")
    s = -t if sign == "minus" else t
    rhs = np.array([[0.0, 0.0], [s, 0.0], [0.0, s]])
    c1, c2 = _solve_support(V, rhs)
    W, c0 = _envelope(u, v, c1, c2)
    if method == "lp":
        sol = _solve_lp(V, rhs)
        if sol is not None:
            W_lp, c0_lp = _envelope(u, v, *sol)
            if c0_lp.sum() < c0.sum():
                W, c0 = W_lp, c0_lp
    elif method != "support":
        raise PreconditionError(f"unknown method {method!r}")
    return Yf, W


def dominating_complex(Y, pair: EigenPairComplex, t, sign: str, budget: Optional[float] = None,
                       tol: Tolerance = DEFAULT_TOL, method: str = "support"):
    """Return ``(X, certificate)`` with ``X >= Y`` moving a +- ib to a -+ t +- ib.

    ``X = Y + e c0' + u c1' + v c2'`` where ``c1, c2`` are orthogonal to e
    with ``[c1 c2]'[u v] = -+t I``; on span{e, u, v} the update is block
    triangular, so only rho and the pair move.  ``c1, c2`` live on the
    3-column support giving the smallest Perron increase (ties: largest
    support determinant, then lexicographic) and ``c0`` is the smallest
    column-wise envelope making the update nonnegative.  ``method="lp"``
    additionally solves the linear program over all supports and keeps the
    better of the two.  The Perron increase ``c0'e`` is reported, not
    promised; ``budget`` (a multiple of t) only flags overshoot.
    """
    Yf, W = _dominating_complex_update(Y, pair, t, sign, tol, method)
    shift = float(np.mean(W.sum(axis=1)))  # rows of e c0' + u c1' + v c2' sum to c0'e
    cert = DominationCertificate(
        min_excess=float(W.min()),
        perron_shift=shift,
        budget=None if budget is None else float(budget) * float(t),
    )
    return Yf + W, cert

"""Eigenvalues, Perron pairs, multiset spectrum matching and certification.

The eigenvalue engine is self-contained: Householder reduction to upper
Hessenberg form followed by the Francis implicit double-shift QR iteration,
reading real eigenvalues off 1x1 blocks and conjugate pairs off 2x2 blocks.
No balancing is performed; the intended inputs are desk-scale (n <= 256).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NumericalFailure, PreconditionError, ShapeError
from .matrix_core import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    centro_violation,
    is_centrosymmetric,
    is_exact,
    min_entry,
    scalar_to_json,
    to_float,
    to_fraction,
)

__all__ = [
    "Spectrum",
    "PerronPair",
    "CertReport",
    "hessenberg",
    "spectrum",
    "perron_pair",
    "match_spectra",
    "certify",
    "cluster_allowance",
    "MAX_ORDER",
]

MAX_ORDER = 256
_QR_ITERATIONS_PER_EIGENVALUE = 60


@dataclass(frozen=True)
class Spectrum:
    """Multiset of complex numbers stored as ``(re, im)`` pairs.

    Components may be floats or ``Fraction`` (exact target lists).
    """

    values: tuple = ()

    @classmethod
    def from_complex(cls, zs) -> "Spectrum":
        return cls(tuple((float(np.real(z)), float(np.imag(z))) for z in zs))

    @classmethod
    def from_pairs(cls, pairs, exact: bool = False) -> "Spectrum":
        conv = to_fraction if exact else _float
        out = []
        for p in pairs:
            if isinstance(p, (list, tuple)):
                if len(p) != 2:
                    raise PreconditionError(f"spectrum entries are [re, im] pairs, got {p!r}")
                out.append((conv(p[0]), conv(p[1])))
            else:
                out.append((conv(p), conv(0)))
        return cls(tuple(out))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_complex(self) -> np.ndarray:
        return np.array([complex(float(re), float(im)) for re, im in self.values], dtype=complex)

    def is_exact(self) -> bool:
        return all(isinstance(re, Fraction) and isinstance(im, Fraction) for re, im in self.values)

    def is_conjugate_closed(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        z = self.as_complex()
        if z.size == 0:
            return True
        ok, _, _ = match_spectra(Spectrum.from_complex(z), Spectrum.from_complex(np.conj(z)), tol)
        return ok

    def to_json(self) -> dict:
        return {"values": [[scalar_to_json(re), scalar_to_json(im)] for re, im in self.values]}

    @classmethod
    def from_json(cls, obj, exact: bool = False) -> "Spectrum":
        try:
            vals = obj["values"]
        except (TypeError, KeyError) as exc:
            raise PreconditionError("spectrum JSON needs a 'values' field") from exc
        return cls.from_pairs(vals, exact=exact)


def _float(x):
    if isinstance(x, str):
        return float(to_fraction(x))
    return float(x)


# -- eigenvalue engine -----------------------------------------------------

def hessenberg(M) -> np.ndarray:
    """Upper Hessenberg matrix orthogonally similar to ``M`` (Householder)."""
    H = np.array(to_float(M), dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        H[k + 1:, k:] -= 2.0 * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v)
        H[k + 2:, k] = 0.0
    return H


def _hqr(H: np.ndarray):
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    1-based scalar loops on nested lists; returns ``(wr, wi)`` lists.
    """
    n = H.shape[0]
    a = [[0.0] * (n + 1)] + [[0.0] + [float(v) for v in row] for row in H]
    wr = [0.0] * (n + 1)
    wi = [0.0] * (n + 1)
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i][j])
    nn = n
    t = 0.0
    while nn >= 1:
        its = 0
        while True:
            # look for a single small subdiagonal element
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(a[ll - 1][ll - 1]) + abs(a[ll][ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll][ll - 1]) + s == s:
                    a[ll][ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn][nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
                break
            y = a[nn - 1][nn - 1]
            w = a[nn][nn - 1] * a[nn - 1][nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = wi[nn] = 0.0
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1] = z
                    wi[nn] = -z
                nn -= 2
                break
            if its == _QR_ITERATIONS_PER_EIGENVALUE:
                raise NumericalFailure(
                    "QR iteration did not converge", residual=abs(a[nn][nn - 1])
                )
            if its and its % 10 == 0:
                # exceptional shift
                t += x
                for i in range(1, nn + 1):
                    a[i][i] -= x
                s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
                y = x = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            # look for two consecutive small subdiagonal elements
            m = nn - 2
            while m >= l:
                z = a[m][m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1][m] + a[m][m + 1]
                q = a[m + 1][m + 1] - z - r - s
                r = a[m + 2][m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m][m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i][i - 2] = 0.0
                if i != m + 2:
                    a[i][i - 3] = 0.0
            # double-shift QR sweep on rows/columns l..nn
            for k in range(m, nn):
                if k != m:
                    p = a[k][k - 1]
                    q = a[k + 1][k - 1]
                    r = a[k + 2][k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k][k - 1] = -a[k][k - 1]
                else:
                    a[k][k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                rk, rk1 = a[k], a[k + 1]
                if k != nn - 1:
                    rk2 = a[k + 2]
                    for j in range(k, nn + 1):
                        p = rk[j] + q * rk1[j] + r * rk2[j]
                        rk2[j] -= p * z
                        rk1[j] -= p * y
                        rk[j] -= p * x
                else:
                    for j in range(k, nn + 1):
                        p = rk[j] + q * rk1[j]
                        rk1[j] -= p * y
                        rk[j] -= p * x
                mmin = nn if nn < k + 3 else k + 3
                for i in range(l, mmin + 1):
                    ai = a[i]
                    p = x * ai[k] + y * ai[k + 1]
                    if k != nn - 1:
                        p += z * ai[k + 2]
                        ai[k + 2] -= p * r
                    ai[k + 1] -= p * q
                    ai[k] -= p
            if l >= nn - 1:
                break
    return wr[1:], wi[1:]


def spectrum(M, max_order: int = MAX_ORDER) -> Spectrum:
    """All eigenvalues of ``M`` with algebraic multiplicity.

    Raises
    ------
    ShapeError
        ``M`` is not square or exceeds ``max_order``.
    NumericalFailure
        The QR iteration stalls; the offending subdiagonal is attached.
    """
    A = to_float(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n > max_order:
        raise ShapeError(f"order {n} exceeds the configured maximum {max_order}")
    if n == 0:
        # the skew block of a 1 x 1 matrix
        return Spectrum(())
    if n == 1:
        return Spectrum(((float(A[0, 0]), 0.0),))
    wr, wi = _hqr(hessenberg(A))
    return Spectrum(tuple((float(r), float(i)) for r, i in zip(wr, wi)))


# -- Perron pairs ------------------------------------------------------------

@dataclass(frozen=True)
class PerronPair:
    rho: float
    vector: np.ndarray
    residual: float = 0.0


def _power(S: np.ndarray, maxiter: int, stop: float = 1e-9):
    """Power iteration from e; returns (rho, x, converged)."""
    n = S.shape[0]
    x = np.ones(n)
    for _ in range(maxiter):
        y = S @ x
        ymax = y.max()
        if ymax <= 0.0:
            # nilpotent direction: e already annihilated
            return 0.0, x, True
        y = y / ymax
        step = float(np.max(np.abs(y - x)))
        x = y
        if step < stop:
            return float((x @ (S @ x)) / (x @ x)), x, True
    return float((x @ (S @ x)) / (x @ x)), x, False


def _polish(S: np.ndarray, rho: float, x: np.ndarray, steps: int = 10):
    """Inverse iteration just above ``rho`` until the residual hits rounding level."""
    n = S.shape[0]
    scale = max(1.0, float(np.max(np.abs(S).sum(axis=1))))
    floor = 8 * np.finfo(float).eps * scale
    for _ in range(steps):
        if float(np.max(np.abs(S @ x - rho * x))) <= floor:
            break
        try:
            y = np.linalg.solve(S - (rho + 1e-10 * scale) * np.eye(n), x)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(y)):
            break
        y = y / y[int(np.argmax(np.abs(y)))]
        if y.min() < -1e-8:
            break
        x = np.maximum(y, 0.0)
        rho = float((x @ (S @ x)) / (x @ x))
    return rho, x


def _perron_plain(S: np.ndarray, maxiter: int):
    scale = max(1.0, float(np.max(np.abs(S).sum(axis=1))))
    bound = 1e-10 * scale
    best = None
    for c in (0.0, float(np.max(np.diag(S))) + 1.0):
        T = S + c * np.eye(S.shape[0])
        rho, x, _ = _power(T, maxiter)
        rho -= c
        rho, x = _polish(S, rho, x)
        res = float(np.max(np.abs(S @ x - rho * x)))
        if res <= bound and x.min() >= 0.0:
            return rho, x, res
        if best is None or res < best[2]:
            best = (rho, x, res)
    raise NumericalFailure("power iteration did not converge", residual=best[2])


def perron_pair(M, prefer_symmetric: bool = True, tol: Tolerance = DEFAULT_TOL,
                maxiter: int = 20_000) -> PerronPair:
    """Spectral radius and a nonnegative eigenvector (max entry 1).

    For a centrosymmetric ``M`` with ``prefer_symmetric`` the iteration runs on
    the half-size symmetric reduced block and the result is lifted, so the
    returned vector satisfies ``J x = x`` exactly.
    """
    A = to_float(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    if min_entry(A) < -tol.structural_tol:
        raise PreconditionError("perron_pair needs a nonnegative matrix")
    A = np.maximum(A, 0.0)
    n = A.shape[0]
    if prefer_symmetric and n > 1 and is_centrosymmetric(A, tol):
        from .centro_decomp import lift_symmetric, reduced_forms, split

        red = reduced_forms(split(A, tol))
        rho, z, _ = _perron_plain(red.sym_block, maxiter)
        x = lift_symmetric(z, n)
    else:
        rho, x, _ = _perron_plain(A, maxiter)
    x = np.maximum(x, 0.0)
    x = x / x.max()
    residual = float(np.max(np.abs(A @ x - rho * x)))
    return PerronPair(rho=rho, vector=x, residual=residual)


# -- matching and certification ---------------------------------------------

def match_spectra(target: Spectrum, computed: Spectrum, tol: Tolerance = DEFAULT_TOL):
    """Minimum-cost perfect matching under complex distance.

    Returns ``(ok, max_distance, pairing)`` where pairing lists
    ``(target_value, computed_value)`` complex tuples.
    """
    if len(target) != len(computed):
        raise ShapeError(f"cardinality mismatch: {len(target)} vs {len(computed)}")
    a = target.as_complex()
    b = computed.as_complex()
    if a.size == 0:
        return True, 0.0, []
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    dist = float(cost[rows, cols].max())
    pairing = [(complex(a[i]), complex(b[j])) for i, j in zip(rows, cols)]
    return dist <= tol.spectral_tol, dist, pairing


@dataclass(frozen=True)
class CertReport:
    nonneg_ok: bool
    centro_ok: bool
    spectrum_ok: bool
    max_entry_violation: float
    max_centro_violation: float
    spectral_mismatch: float
    pairing: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.nonneg_ok and self.centro_ok and self.spectrum_ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "nonneg_ok": self.nonneg_ok,
            "centro_ok": self.centro_ok,
            "spectrum_ok": self.spectrum_ok,
            "max_entry_violation": self.max_entry_violation,
            "max_centro_violation": self.max_centro_violation,
            "spectral_mismatch": self.spectral_mismatch,
            "pairing": [[[t.real, t.imag], [c.real, c.imag]] for t, c in self.pairing],
        }


def cluster_allowance(values, scale) -> float:
    """Accuracy allowance for nearly multiple eigenvalues.

    A defective double eigenvalue is only determined to about
    sqrt(machine eps) relative to the matrix norm.
    """
    z = np.asarray(list(values), dtype=complex)
    if z.size < 2:
        return 0.0
    gaps = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() < 1e-6 * scale:
        return 4.0 * np.sqrt(np.finfo(float).eps) * scale
    return 0.0


def certify(M, expected: Spectrum, tol: Tolerance = DEFAULT_TOL) -> CertReport:
    """Check nonnegativity, centrosymmetry and the spectrum of ``M``."""
    M = as_matrix(M) if not isinstance(M, np.ndarray) else M
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    if len(expected) != M.shape[0]:
        raise ShapeError(f"expected spectrum has {len(expected)} values for order {M.shape[0]}")
    entry_violation = max(0.0, -min_entry(M))
    cv = centro_violation(M)
    ok, dist, pairing = match_spectra(expected, spectrum(M), tol)
    if is_exact(M):
        nonneg_ok = min(M.flat) >= -to_fraction(tol.structural_tol)
    else:
        nonneg_ok = entry_violation <= tol.structural_tol
    return CertReport(
        nonneg_ok=bool(nonneg_ok),
        centro_ok=cv <= tol.structural_tol,
        spectrum_ok=ok,
        max_entry_violation=entry_violation,
        max_centro_violation=cv,
        spectral_mismatch=dist,
        pairing=pairing,
    )

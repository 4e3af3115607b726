"""Realize a prescribed list as the non-Perron spectrum of a nonnegative
centrosymmetric matrix.

The list ``gamma`` (n - 1 values) together with 0 is split into two
conjugate-closed parts.  The first part becomes the spectrum of a zero row
sum companion ``E``, the second that of a block-diagonal ``F``.  A vector
``q`` lifts ``E + e q'`` and ``F`` to reduced blocks whose assembly is
nonnegative, centrosymmetric, has constant row sums ``e'q`` and spectrum
``{e'q} + gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .centro_decomp import assemble_from_reduced
from .errors import CertificationError, MembershipError, PreconditionError, ShapeError
from .matrix_core import DEFAULT_TOL, Tolerance, zeros_like_mode
from .spectral_engine import CertReport, Spectrum, certify, cluster_allowance

__all__ = [
    "RealizationInput",
    "RealizationResult",
    "in_ctilde",
    "partition_gamma",
    "build_EF",
    "realize_L4",
    "lambda_gamma_bound",
]


@dataclass(frozen=True)
class RealizationInput:
    """A target list and its split.

    ``part1`` and ``part2`` hold atoms ``("real", lam)`` or
    ``("pair", re, im)`` with ``im > 0``; ``part1`` starts with the real 0.
    """

    gamma: Spectrum
    n: int
    part1: tuple
    part2: tuple
    exact: bool = False

    @property
    def parity(self) -> str:
        return "even" if self.n % 2 == 0 else "odd"

    @property
    def gamma1(self) -> Spectrum:
        return _atoms_to_spectrum(self.part1)

    @property
    def gamma2(self) -> Spectrum:
        return _atoms_to_spectrum(self.part2)


@dataclass
class RealizationResult:
    perron_value: object
    matrix: np.ndarray
    q: np.ndarray
    E: np.ndarray
    F: np.ndarray
    cert: CertReport
    partition: Optional[RealizationInput] = None


def _atoms_to_spectrum(atoms) -> Spectrum:
    vals = []
    for a in atoms:
        if a[0] == "real":
            vals.append((a[1], a[1] * 0))
        else:
            vals.append((a[1], a[2]))
            vals.append((a[1], -a[2]))
    return Spectrum(tuple(vals))


def _atoms(gamma: Spectrum, tol: Tolerance):
    """Split ``gamma`` into sorted reals and conjugate pairs; None if not closed."""
    exact = gamma.is_exact()
    reals, upper, lower = [], [], []
    for re, im in gamma.values:
        if abs(float(im)) <= (0 if exact else tol.spectral_tol):
            reals.append(re)
        elif im > 0:
            upper.append((re, im))
        else:
            lower.append((re, im))
    if len(upper) != len(lower):
        return None
    pairs = []
    free = list(lower)
    for re, im in sorted(upper, key=lambda z: (-abs(complex(float(z[0]), float(z[1]))), -float(z[1]))):
        dists = [abs(complex(float(re - r2), float(im + i2))) for r2, i2 in free]
        j = int(np.argmin(dists))
        if dists[j] > (0 if exact else tol.spectral_tol):
            return None
        r2, i2 = free.pop(j)
        if exact:
            pairs.append((re, im))
        else:
            pairs.append(((re + r2) / 2, (im - i2) / 2))
    reals.sort(reverse=True)
    pairs.sort(key=lambda p: (-abs(complex(float(p[0]), float(p[1]))), -float(p[1])))
    return reals, pairs


def in_ctilde(gamma: Spectrum, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``gamma`` is conjugate-closed and is not an odd number of
    non-real conjugate pairs with no real values."""
    split = _atoms(gamma, tol)
    if split is None:
        return False
    reals, pairs = split
    return not (not reals and len(pairs) % 2 == 1)


def _sizes(n: int):
    m = n // 2
    return (m if n % 2 == 0 else m + 1), m


def _make_input(gamma, n, reals1, pairs1, reals2, pairs2, exact) -> RealizationInput:
    zero = Fraction(0) if exact else 0.0
    key_pair = lambda p: (-abs(complex(float(p[0]), float(p[1]))), -float(p[1]))
    part1 = [("real", zero)]
    part1 += [("real", r) for r in sorted(reals1, reverse=True)]
    part1 += [("pair", a, b) for a, b in sorted(pairs1, key=key_pair)]
    part2 = [("real", r) for r in sorted(reals2, reverse=True)]
    part2 += [("pair", a, b) for a, b in sorted(pairs2, key=key_pair)]
    return RealizationInput(gamma=gamma, n=n, part1=tuple(part1), part2=tuple(part2), exact=exact)


def _checked_atoms(gamma: Spectrum, tol: Tolerance):
    if len(gamma) < 1:
        raise ShapeError("gamma needs at least one value")
    split = _atoms(gamma, tol)
    if split is None:
        raise MembershipError("gamma is not conjugate-closed")
    reals, pairs = split
    if not reals and len(pairs) % 2 == 1:
        raise MembershipError("an odd number of conjugate pairs without real values is excluded")
    return reals, pairs


def partition_gamma(gamma: Spectrum, tol: Tolerance = DEFAULT_TOL) -> RealizationInput:
    """Deterministic split of ``gamma + {0}``.

    0 goes to the first part.  Pairs stay atomic and fill the second part
    first, largest modulus first; the largest reals fill the remaining slots
    of the first part and the rest go to the second.
    """
    reals, pairs = _checked_atoms(gamma, tol)
    n = len(gamma) + 1
    size1, size2 = _sizes(n)
    slots1 = size1 - 1
    p = len(pairs)
    p1 = max(0, p - size2 // 2)
    r1 = slots1 - 2 * p1
    pairs2, pairs1 = pairs[:p - p1], pairs[p - p1:]
    if r1 < 0 or r1 > len(reals) or len(reals) - r1 + 2 * len(pairs2) != size2:
        raise AssertionError("no admissible split; membership check is inconsistent")
    return _make_input(gamma, n, reals[:r1], pairs1, reals[r1:], pairs2, gamma.is_exact())


def _alternative_partitions(gamma: Spectrum, tol: Tolerance):
    """Every admissible split, in a fixed order (duplicates by value skipped)."""
    reals, pairs = _checked_atoms(gamma, tol)
    n = len(gamma) + 1
    size1, size2 = _sizes(n)
    slots1 = size1 - 1
    seen = set()
    for k in range(len(pairs) + 1):
        r1 = slots1 - 2 * k
        if r1 < 0 or r1 > len(reals) or len(reals) - r1 + 2 * (len(pairs) - k) != size2:
            continue
        for pidx in combinations(range(len(pairs)), k):
            pairs1 = [pairs[i] for i in pidx]
            pairs2 = [pairs[i] for i in range(len(pairs)) if i not in pidx]
            for ridx in combinations(range(len(reals)), r1):
                reals1 = [reals[i] for i in ridx]
                reals2 = [reals[i] for i in range(len(reals)) if i not in ridx]
                key = (tuple(reals1), tuple(pairs1))
                if key in seen:
                    continue
                seen.add(key)
                yield _make_input(gamma, n, reals1, pairs1, reals2, pairs2, gamma.is_exact())


def build_EF(inp: RealizationInput):
    """Companion blocks ``(E, F)`` for a split.

    ``E`` has zero row sums and spectrum ``gamma1``: its first row is zero,
    a real row carries ``-lam`` in column 0 and ``lam`` on the diagonal, a
    pair occupies two rows with ``[[re, im], [-im, re]]`` on the diagonal and
    ``-re -+ im`` in column 0.  ``F`` is block diagonal with spectrum ``gamma2``.
    """
    exact = inp.exact
    n1 = sum(1 if a[0] == "real" else 2 for a in inp.part1)
    n2 = sum(1 if a[0] == "real" else 2 for a in inp.part2)
    E = zeros_like_mode((n1, n1), exact)
    i = 1  # row 0 belongs to the eigenvalue 0
    for a in inp.part1[1:]:
        if a[0] == "real":
            E[i, 0] = -a[1]
            E[i, i] = a[1]
            i += 1
        else:
            re, im = a[1], a[2]
            E[i, 0] = -re - im
            E[i + 1, 0] = -re + im
            E[i, i], E[i, i + 1] = re, im
            E[i + 1, i], E[i + 1, i + 1] = -im, re
            i += 2
    F = zeros_like_mode((n2, n2), exact)
    i = 0
    for a in inp.part2:
        if a[0] == "real":
            F[i, i] = a[1]
            i += 1
        else:
            re, im = a[1], a[2]
            F[i, i], F[i, i + 1] = re, im
            F[i + 1, i], F[i + 1, i + 1] = -im, re
            i += 2
    return E, F


def _q_vector(E, F):
    """Column-wise ``max_i max(|e_ij + f_ij|, |e_ij - f_ij|)``."""
    plus, minus = E + F, E - F
    return np.array([max(max(abs(v) for v in plus[:, j]), max(abs(v) for v in minus[:, j]))
                     for j in range(E.shape[1])], dtype=E.dtype)


def _realize_partition(inp: RealizationInput, tol: Tolerance) -> RealizationResult:
    E, F = build_EF(inp)
    exact = inp.exact
    if inp.parity == "even":
        q = _q_vector(E, F)
        S = E + q[None, :]
        C = assemble_from_reduced(S, F, "even")
    else:
        col0 = E[1:, 0]
        q1 = max(abs(v) for v in col0)
        E_hat = E[1:, 1:]
        q_hat = _q_vector(E_hat, F)
        S = E_hat + q_hat[None, :]
        C = assemble_from_reduced(S, F, "odd", odd_border=(col0 + q1, q_hat, q1))
        q = np.concatenate([np.array([q1], dtype=q_hat.dtype), q_hat])
    perron = sum(q.tolist(), Fraction(0) if exact else 0.0)
    expected = Spectrum(((perron, perron * 0),) + tuple(inp.gamma.values))
    scale = max(1.0, float(perron))
    slack = cluster_allowance(expected.as_complex(), scale)
    cert = certify(C, expected, Tolerance(tol.structural_tol, tol.spectral_tol + slack))
    if not cert.ok:
        raise CertificationError("realized matrix failed certification", report=cert)
    return RealizationResult(perron_value=perron, matrix=C, q=q, E=E, F=F, cert=cert, partition=inp)


def realize_L4(gamma: Spectrum, tol: Tolerance = DEFAULT_TOL) -> RealizationResult:
    """Nonnegative centrosymmetric matrix with spectrum ``{e'q} + gamma``.

    Exact (``Fraction``) input lists give a bit-exact rational matrix.

    Raises
    ------
    MembershipError
        ``gamma`` is not conjugate-closed or is an odd number of pairs only.
    CertificationError
        Internal guard; the assembled matrix failed its own check.
    """
    return _realize_partition(partition_gamma(gamma, tol), tol)


def lambda_gamma_bound(gamma: Spectrum, refine_budget: Optional[int] = None,
                       tol: Tolerance = DEFAULT_TOL):
    """Upper bound on the least Perron value realizable together with ``gamma``.

    Without a budget this is ``e'q`` of :func:`realize_L4`.  With a budget up
    to that many further splits are realized, each result is lowered by the
    largest admissible Perron descent ``n * min entry`` and the smallest
    certified Perron value is returned with its matrix.
    """
    from .centro_perturb import shift_perron

    best = realize_L4(gamma, tol)
    candidates = [best]
    if refine_budget:
        if refine_budget < 0:
            raise PreconditionError("refine_budget must be nonnegative")
        for k, inp in enumerate(_alternative_partitions(gamma, tol)):
            if k >= refine_budget:
                break
            try:
                candidates.append(_realize_partition(inp, tol))
            except CertificationError:
                continue
    upper, matrix = best.perron_value, best.matrix
    for res in candidates:
        value, M = res.perron_value, res.matrix
        if refine_budget:
            n = M.shape[0]
            step = n * min(M.flat)
            if step > 0:
                lowered = shift_perron(M, step, "down", tol, allow_equal=True)
                expected = Spectrum(((value - step, (value - step) * 0),) + tuple(gamma.values))
                slack = cluster_allowance(expected.as_complex(), max(1.0, float(value)))
                cert = certify(lowered, expected, Tolerance(tol.structural_tol, tol.spectral_tol + slack))
                if cert.ok:
                    value, M = value - step, lowered
        if value < upper:
            upper, matrix = value, M
    return upper, matrix

"""End-to-end perturbations of nonnegative centrosymmetric matrices.

Every pipeline normalizes to constant row sums, splits into reduced blocks,
moves the requested eigenvalue inside the block that owns it, reassembles
additively and certifies the result against the expected spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .centro_decomp import reduced_forms, split, update_from_reduced
from .errors import (
    BoundViolation,
    CertificationError,
    IllConditionedError,
    InfeasibleError,
    MembershipError,
    PreconditionError,
    ShapeError,
)
from .matrix_core import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    flip,
    is_exact,
    matrix_to_json,
    min_entry,
    scalar_to_json,
    to_float,
    to_fraction,
    zeros_like_mode,
)
from .perturb_kernels import (
    EigenPairReal,
    _complex_rank_two_update,
    _dominating_complex_update,
    _dominating_real_update,
    _sign_normalize,
    complex_eigenpair,
    exact_nullspace,
    real_eigenpair,
)
from .spectral_engine import (
    CertReport,
    Spectrum,
    certify,
    cluster_allowance,
    match_spectra,
    perron_pair,
    spectrum,
)

__all__ = [
    "PerturbReport",
    "PreparedMatrix",
    "prepare",
    "stochastic_form",
    "shift_perron",
    "guo_real",
    "guo_complex",
]

PERRON_FLOOR = 1e-13
EPS_HALVINGS = 20


@dataclass
class PerturbReport:
    output: np.ndarray
    case_path: str  # even_sym | even_skew | odd_sym | odd_skew
    perron_shift: object
    delta_used: float
    cert: CertReport
    t: object
    sign: str
    expected: Optional[Spectrum] = None
    moved: tuple = field(default_factory=tuple)
    stochastic_eps: float = 0.0
    sym_excess: float = 0.0

    def to_json(self) -> dict:
        return {
            "output": matrix_to_json(self.output),
            "case_path": self.case_path,
            "perron_shift": scalar_to_json(self.perron_shift),
            "delta_used": float(self.delta_used),
            "t": scalar_to_json(self.t),
            "sign": self.sign,
            "moved": [[float(z.real), float(z.imag)] for z in self.moved],
            "stochastic_eps": float(self.stochastic_eps),
            "sym_excess": float(self.sym_excess),
            "expected": None if self.expected is None else self.expected.to_json(),
            "cert": self.cert.to_json(),
        }


# -- helpers -------------------------------------------------------------------

def _inf_norm(M) -> float:
    return float(np.max(np.abs(to_float(M)).sum(axis=1)))


def _require_nonneg_centro(C, tol: Tolerance):
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {C.shape}")
    if min_entry(C) < -tol.structural_tol:
        raise PreconditionError("matrix must be nonnegative")
    split(C, tol)  # raises StructureError on a centrosymmetry violation


def _constant_row_sum(C, tol: Tolerance):
    """Common row sum (exact in exact mode) or None; relative in float mode."""
    sums = C.sum(axis=1)
    if is_exact(C):
        return sums[0] if max(sums) == min(sums) else None
    spread = float(np.max(sums) - np.min(sums))
    if spread > tol.structural_tol * max(1.0, _inf_norm(C)):
        return None
    return float(np.mean(sums))


def _is_irreducible(M) -> bool:
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    ncomp, _ = connected_components(csr_matrix(to_float(M) > 0), directed=True,
                                    connection="strong")
    return ncomp == 1


def _diag_similarity(Cp, x):
    # D^-1 C' D with D = diag(x); x symmetric keeps the result exactly centrosymmetric
    return (Cp * x[None, :]) / x[:, None]


def _level_rows(B):
    """Raise diagonal entries so every row sum equals the largest one.

    Division by small Perron entries leaves row sums that differ at rounding
    level; the correction is nonnegative and equal on centro-paired rows.
    """
    sums = B.sum(axis=1)
    gap = sums.max() - sums
    gap = (gap + gap[::-1]) / 2
    B = B.copy()
    idx = np.arange(B.shape[0])
    B[idx, idx] += gap
    return B


def _stochastic_form(C, tol: Tolerance = DEFAULT_TOL):
    """Return ``(B, eps, distortion)``; see :func:`stochastic_form`."""
    _require_nonneg_centro(C, tol)
    if _constant_row_sum(C, tol) is not None:
        return C, 0.0, 0.0
    Cf = to_float(C)
    Cf = np.maximum((Cf + flip(Cf)) / 2, 0.0)
    target = spectrum(Cf)
    schedule = []
    if _is_irreducible(Cf):
        schedule.append(0.0)
    eps = 1e-8 * (1.0 + float(Cf.max()))
    for _ in range(EPS_HALVINGS + 1):
        schedule.append(eps)
        eps /= 2
    best = None
    for eps in schedule:
        Cp = Cf + eps
        pp = perron_pair(Cp, tol=tol)
        x = pp.vector
        if x.min() < PERRON_FLOOR:
            if eps == 0.0:
                continue
            if best is None:
                raise IllConditionedError(
                    f"Perron vector entry {x.min():.3g} below {PERRON_FLOOR:g}",
                    residual=float(x.min()),
                )
            break
        B = _level_rows(_diag_similarity(Cp, x))
        _, dist, _ = match_spectra(target, spectrum(B), tol)
        if best is None or dist < best[2]:
            best = (B, eps, dist)
        if dist <= tol.spectral_tol:
            break
    if best is None:
        raise IllConditionedError("no usable Perron vector in the perturbation schedule")
    return best


def stochastic_form(C, tol: Tolerance = DEFAULT_TOL, return_info: bool = False):
    """Diagonally similar nonnegative centrosymmetric matrix with constant row sums.

    With ``x`` the symmetric Perron vector of ``C' = C + eps * ones`` the
    result is ``diag(x)^-1 C' diag(x)``.  ``eps = 0`` is used when ``C`` is
    irreducible; otherwise ``eps`` starts at ``1e-8 (1 + max C)`` and is halved
    while the spectrum moves by more than ``spectral_tol``.  Inputs that
    already have constant row sums are returned unchanged.

    Raises
    ------
    IllConditionedError
        The Perron vector has an entry below 1e-13.

    With ``return_info`` the result is ``(B, eps, distortion)`` where
    ``distortion`` is the spectral distance between ``C`` and ``B``.
    """
    out = _stochastic_form(C, tol)
    return out if return_info else out[0]


def shift_perron(C, eps, direction: str, tol: Tolerance = DEFAULT_TOL, allow_equal: bool = False):
    """``C +- (eps/n) ones``: moves the Perron root by ``+-eps``, nothing else.

    ``down`` needs ``eps < n * min(C)`` (``<=`` with ``allow_equal``) so the
    result stays nonnegative.
    """
    _require_nonneg_centro(C, tol)
    if _constant_row_sum(C, tol) is None:
        raise PreconditionError("shift_perron needs constant row sums (apply stochastic_form)")
    if direction not in ("up", "down"):
        raise PreconditionError(f"direction must be 'up' or 'down', got {direction!r}")
    n = C.shape[0]
    eps = to_fraction(eps) if is_exact(C) else float(eps)
    if eps < 0:
        raise PreconditionError("eps must be nonnegative")
    step = eps / n
    if direction == "up":
        return C + step
    bound = n * (min(C.flat) if is_exact(C) else float(C.min()))
    if eps > bound or (eps == bound and not allow_equal and eps != 0):
        raise BoundViolation(f"down shift needs eps < n*min = {float(bound):.6g}, got {float(eps):.6g}")
    return C - step


@dataclass
class PreparedMatrix:
    """Input-dependent data shared by every perturbation of one matrix.

    Build with :func:`prepare`; passing it instead of the raw matrix to
    :func:`guo_real` or :func:`guo_complex` skips the normalization and the
    block spectra.
    """

    C: np.ndarray
    B: np.ndarray
    eps: float
    distortion: float
    rho: object
    blocks: object
    reduced: object
    sym_vals: list
    skew_vals: list
    input_vals: list
    input_slack: float
    tol: Tolerance


def prepare(C, tol: Tolerance = DEFAULT_TOL) -> PreparedMatrix:
    if isinstance(C, PreparedMatrix):
        return C
    B, eps, dist = _stochastic_form(C, tol)
    rho = _constant_row_sum(B, tol)
    if rho is None:
        # normalized output: row sums agree to the Perron residual
        rho = float(np.mean(B.sum(axis=1)))
    blocks = split(B, tol)
    red = reduced_forms(blocks)
    input_vals = list(spectrum(C).as_complex())
    return PreparedMatrix(
        C=C, B=B, eps=eps, distortion=dist, rho=rho, blocks=blocks, reduced=red,
        sym_vals=list(spectrum(red.sym_block).as_complex()),
        skew_vals=list(spectrum(red.skew_block).as_complex()),
        input_vals=input_vals,
        input_slack=cluster_allowance(input_vals, max(1.0, _inf_norm(C))),
        tol=tol,
    )


def _close(values, z, tol):
    return [i for i, w in enumerate(values) if abs(w - z) <= tol]


def _locate(target: complex, sym_vals, skew_vals, rho, tol, block):
    """Return (block name, matched value) for ``target``; skew preferred."""
    sym_list = list(sym_vals)
    if sym_list:
        # one copy of the Perron root is never available for moving
        i_rho = int(np.argmin([abs(w - rho) for w in sym_list]))
        sym_list.pop(i_rho)
    cands = []
    if block in ("auto", "skew"):
        hits = _close(skew_vals, target, tol)
        if hits:
            cands.append(("skew", min((skew_vals[i] for i in hits), key=lambda w: abs(w - target))))
    if block in ("auto", "sym"):
        hits = _close(sym_list, target, tol)
        if hits:
            cands.append(("sym", min((sym_list[i] for i in hits), key=lambda w: abs(w - target))))
    if block not in ("auto", "sym", "skew"):
        raise PreconditionError(f"block must be auto, sym or skew, got {block!r}")
    if not cands:
        raise MembershipError(f"{target} is not a movable eigenvalue of the requested block")
    return cands[0]


def _expected_spectrum(prep: PreparedMatrix, shift, moves):
    """sigma(C) with the Perron root moved by ``shift`` and ``moves`` applied."""
    vals = list(prep.input_vals)
    used = set()
    rho = float(prep.rho)
    i = min(range(len(vals)), key=lambda j: abs(vals[j] - rho))
    vals[i] = vals[i] + float(shift)
    used.add(i)
    for old, new in moves:
        j = min((j for j in range(len(vals)) if j not in used), key=lambda j: abs(vals[j] - old))
        vals[j] = new
        used.add(j)
    return Spectrum.from_complex(vals)


def _location_tol(prep: PreparedMatrix, target: complex) -> float:
    return (prep.tol.spectral_tol * max(1.0, abs(target)) + prep.distortion
            + cluster_allowance(prep.sym_vals + prep.skew_vals, max(1.0, _inf_norm(prep.B))))


def _sym_excess(prep: PreparedMatrix, X) -> float:
    """min entry of (output sym block - normalized input sym block)."""
    out = reduced_forms(split(X, prep.tol)).sym_block
    return min_entry(to_float(out) - to_float(prep.reduced.sym_block))


def _certify_or_raise(X, expected, tol, slack):
    scale = max(1.0, _inf_norm(X))
    slack = slack + cluster_allowance(expected.as_complex(), scale)
    ctol = Tolerance(tol.structural_tol, tol.spectral_tol + slack)
    cert = certify(X, expected, ctol)
    if not cert.ok:
        raise CertificationError("perturbed matrix failed certification", report=cert)
    return cert


def _sym_eigvec(S, lam, rho, exact_lam):
    """Eigenvector of the symmetric block for ``lam`` independent of e."""
    m = S.shape[0]
    if is_exact(S) and exact_lam is not None:
        basis = exact_nullspace(S - exact_lam * np.eye(m, dtype=int).astype(object))
        for b in basis:
            u = b - sum(b, Fraction(0)) / m if exact_lam == rho else b
            if any(v != u[0] for v in u):
                return EigenPairReal(exact_lam, _sign_normalize(u), 0.0)
        if basis:
            raise InfeasibleError("eigenvalue equals the Perron root with a defective eigenspace")
    Sf = to_float(S)
    if abs(lam - float(rho)) <= 1e-8 * max(1.0, abs(float(rho))):
        _, sv, vh = np.linalg.svd(Sf - lam * np.eye(m))
        null = vh[sv <= 1e-8 * max(1.0, sv[0])]
        if len(null) < 2:
            raise InfeasibleError("eigenvalue equals the Perron root with a defective eigenspace")
        devs = null - null.mean(axis=1, keepdims=True)
        u = devs[int(np.argmax(np.abs(devs).max(axis=1)))]
        return EigenPairReal(lam, _sign_normalize(u), 0.0)
    return real_eigenpair(Sf, lam)


def _exact_eigenvalue(M, lam):
    """``lam`` as a Fraction if it is an exact eigenvalue of the exact matrix ``M``."""
    if not is_exact(M):
        return None
    try:
        q = to_fraction(lam)
    except PreconditionError:
        return None
    m = M.shape[0]
    return q if exact_nullspace(M - q * np.eye(m, dtype=int).astype(object)) else None


def _blocks_to_float(blocks):
    from .centro_decomp import CentroBlocks

    f = lambda a: None if a is None else to_float(a)
    c = None if blocks.c is None else float(blocks.c)
    return CentroBlocks(blocks.parity, f(blocks.A), f(blocks.B), f(blocks.x), f(blocks.y), c)


# -- real eigenvalue ---------------------------------------------------------

def guo_real(C, lambda2, t, sign: str, tol: Tolerance = DEFAULT_TOL, block: str = "auto") -> PerturbReport:
    """Move a real non-Perron eigenvalue by ``+-t`` and the Perron root by ``+t``.

    Parameters
    ----------
    C : ndarray or PreparedMatrix
        Nonnegative centrosymmetric matrix (float or exact).
    lambda2 : real
        Eigenvalue to move, matched against the reduced blocks.
    t : nonnegative real
    sign : {"plus", "minus"}
    block : {"auto", "sym", "skew"}
        Reduced block to take ``lambda2`` from; ``auto`` prefers the skew block.

    Returns
    -------
    PerturbReport
        Certified output; raises ``CertificationError`` if the check fails.
    """
    if sign not in ("plus", "minus"):
        raise PreconditionError(f"sign must be 'plus' or 'minus', got {sign!r}")
    prep = prepare(C, tol)
    tol = prep.tol
    blocks, red, rho = prep.blocks, prep.reduced, prep.rho
    t = to_fraction(t) if is_exact(prep.B) else float(t)
    if t < 0:
        raise PreconditionError("t must be nonnegative")
    target = complex(float(lambda2), 0.0)
    where, found = _locate(target, prep.sym_vals, prep.skew_vals, float(rho),
                           _location_tol(prep, target), block)
    lam = float(found.real)
    m = blocks.m
    odd = blocks.parity == "odd"

    if where == "skew":
        K = red.skew_block
        lam_q = _exact_eigenvalue(K, lambda2)
        if lam_q is not None:
            w = _sign_normalize(exact_nullspace(K - lam_q * np.eye(m, dtype=int).astype(object))[0])
        else:
            blocks = _blocks_to_float(blocks)
            t = float(t)
            w = real_eigenpair(to_float(K), lam).u
        signed_t = t if sign == "plus" else -t
        k = int(np.argmax([float(v) for v in w]))  # w_k = 1
        size = m + 1 if odd else m
        dS = zeros_like_mode((size, size), is_exact(w))
        dK = zeros_like_mode((m, m), is_exact(w))
        off = 1 if odd else 0
        dS[:, off + k] += t  # odd: the 2y' row carries t in position k as well
        dK[:, k] += w * signed_t
        X = update_from_reduced(blocks, dS, dK)
        shift = t
    else:
        S = red.sym_block
        pair = _sym_eigvec(S, lam, rho, _exact_eigenvalue(S, lambda2))
        Yb = S if is_exact(pair.u) else to_float(S)
        if not is_exact(pair.u):
            blocks = _blocks_to_float(blocks)
            t = float(t)
        _, dS, t = _dominating_real_update(Yb, pair, t, sign, tol)
        X = update_from_reduced(blocks, dS)
        shift = t
    moved_to = lam + float(t if sign == "plus" else -t)

    expected = _expected_spectrum(prep, float(shift), [(complex(lam), complex(moved_to))])
    cert = _certify_or_raise(X, expected, tol, prep.distortion + prep.input_slack)
    return PerturbReport(
        output=X,
        case_path=f"{blocks.parity}_{where}",
        perron_shift=shift,
        delta_used=1.0,
        cert=cert,
        t=t,
        sign=sign,
        expected=expected,
        moved=(complex(lam), complex(moved_to)),
        stochastic_eps=prep.eps,
        sym_excess=_sym_excess(prep, X),
    )


# -- complex pair ------------------------------------------------------------

def guo_complex(C, a, b, t, sign: str, tol: Tolerance = DEFAULT_TOL, block: str = "auto",
                method: str = "support") -> PerturbReport:
    """Move a conjugate pair ``a +- ib`` to ``a -+ t +- ib``.

    Skew-block pairs use the two-column bounded update together with
    ``t e (e_p + e_q)'`` on the symmetric block, so the Perron root rises by
    exactly ``2t`` for either sign.  Symmetric-block pairs use the dominating
    rank-three update and report the Perron increase it needed.
    """
    if sign not in ("plus", "minus"):
        raise PreconditionError(f"sign must be 'plus' or 'minus', got {sign!r}")
    a, b, t = float(a), abs(float(b)), float(t)
    if t < 0:
        raise PreconditionError("t must be nonnegative")
    if b == 0:
        raise PreconditionError("b must be nonzero; use guo_real for real eigenvalues")
    prep = prepare(C, tol)
    tol = prep.tol
    blocks = _blocks_to_float(prep.blocks)
    red = prep.reduced
    target = complex(a, b)
    loc_tol = _location_tol(prep, target)
    where, found = _locate(target, prep.sym_vals, prep.skew_vals, float(prep.rho), loc_tol, block)
    af, bf = float(found.real), abs(float(found.imag))
    vals = prep.skew_vals if where == "skew" else prep.sym_vals
    if len(_close(vals, complex(af, bf), max(loc_tol, 1e-7))) > 1:
        raise PreconditionError(f"{target} is not a simple eigenvalue")
    m = blocks.m
    odd = blocks.parity == "odd"
    moved_re = af - t if sign == "minus" else af + t

    if where == "skew":
        pair = complex_eigenpair(red.skew_block, af, bf)
        U, p, q, _ = _complex_rank_two_update(pair, t, tol)
        size = m + 1 if odd else m
        off = 1 if odd else 0
        dS = np.zeros((size, size))
        dS[:, off + p] += t
        dS[:, off + q] += t
        dK = -U if sign == "minus" else U
        X = update_from_reduced(blocks, dS, dK)
        shift = 2 * t
    else:
        S = to_float(red.sym_block)
        pair = complex_eigenpair(S, af, bf)
        _, W = _dominating_complex_update(S, pair, t, sign, tol, method)
        X = update_from_reduced(blocks, W)
        shift = float(np.mean(W.sum(axis=1)))

    moves = [(complex(af, bf), complex(moved_re, bf)), (complex(af, -bf), complex(moved_re, -bf))]
    expected = _expected_spectrum(prep, shift, moves)
    cert = _certify_or_raise(X, expected, tol, prep.distortion + prep.input_slack)
    return PerturbReport(
        output=X,
        case_path=f"{blocks.parity}_{where}",
        perron_shift=shift,
        delta_used=(shift / t) if t > 0 else 0.0,
        cert=cert,
        t=t,
        sign=sign,
        expected=expected,
        moved=(complex(af, bf), complex(moved_re, bf)),
        stochastic_eps=prep.eps,
        sym_excess=_sym_excess(prep, X),
    )

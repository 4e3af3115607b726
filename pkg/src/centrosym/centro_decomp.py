"""Block structure of centrosymmetric matrices.

Even order ``n = 2m``::

    C = [[A, JBJ],
         [B, JAJ]]

Odd order ``n = 2m + 1``::

    C = [[A,  x,  JBJ],
         [y', c,  y'J],
         [B,  Jx, JAJ]]

The spectrum splits between the symmetric reduced block ``A + JB`` (bordered
by ``c, 2y', x`` in odd order) and the skew block ``A - JB``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ShapeError, StructureError
from .matrix_core import DEFAULT_TOL, Tolerance, centro_violation, is_exact, to_float, zeros_like_mode

__all__ = [
    "CentroBlocks",
    "ReducedForms",
    "split",
    "assemble",
    "reduced_forms",
    "assemble_from_reduced",
    "update_from_reduced",
    "lift_symmetric",
]


@dataclass(frozen=True)
class CentroBlocks:
    parity: str  # "even" | "odd"
    A: np.ndarray
    B: np.ndarray
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    c: object = None

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return 2 * self.m + (self.parity == "odd")


@dataclass(frozen=True)
class ReducedForms:
    sym_block: np.ndarray
    skew_block: np.ndarray
    orth_sym_block: Optional[np.ndarray] = None


def _rows_flipped(M):
    return M[::-1].copy()


def split(C, tol: Tolerance = DEFAULT_TOL) -> CentroBlocks:
    """Read the blocks of a centrosymmetric matrix.

    Raises
    ------
    StructureError
        ``C`` is not centrosymmetric within ``tol.structural_tol``.
    """
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {C.shape}")
    viol = centro_violation(C)
    if viol > tol.structural_tol:
        raise StructureError(f"matrix is not centrosymmetric (violation {viol:.3g})", violation=viol)
    n = C.shape[0]
    m = n // 2
    if n % 2 == 0:
        return CentroBlocks("even", C[:m, :m].copy(), C[m:, :m].copy())
    return CentroBlocks(
        "odd",
        C[:m, :m].copy(),
        C[m + 1:, :m].copy(),
        x=C[:m, m].copy(),
        y=C[m, :m].copy(),
        c=C[m, m],
    )


def _check_blocks(blocks: CentroBlocks):
    m = blocks.A.shape[0]
    if blocks.A.shape != (m, m) or blocks.B.shape != (m, m):
        raise ShapeError("A and B must be square of equal size")
    if blocks.parity == "odd":
        if blocks.x is None or blocks.y is None or blocks.c is None:
            raise ShapeError("odd blocks need x, y and c")
        if blocks.x.shape != (m,) or blocks.y.shape != (m,):
            raise ShapeError("x and y must have length m")
    elif blocks.parity != "even":
        raise ShapeError(f"unknown parity {blocks.parity!r}")


def assemble(blocks: CentroBlocks) -> np.ndarray:
    _check_blocks(blocks)
    A, B = blocks.A, blocks.B
    m = A.shape[0]
    dtype = object if is_exact(A) or is_exact(B) else float
    if blocks.parity == "even":
        C = np.empty((2 * m, 2 * m), dtype=dtype)
        C[:m, :m] = A
        C[:m, m:] = B[::-1, ::-1]
        C[m:, :m] = B
        C[m:, m:] = A[::-1, ::-1]
        return C
    n = 2 * m + 1
    C = np.empty((n, n), dtype=dtype)
    C[:m, :m] = A
    C[:m, m] = blocks.x
    C[:m, m + 1:] = B[::-1, ::-1]
    C[m, :m] = blocks.y
    C[m, m] = blocks.c
    C[m, m + 1:] = blocks.y[::-1]
    C[m + 1:, :m] = B
    C[m + 1:, m] = blocks.x[::-1]
    C[m + 1:, m + 1:] = A[::-1, ::-1]
    return C


def reduced_forms(blocks: CentroBlocks) -> ReducedForms:
    """Symmetric and skew reduced blocks.

    In odd order ``sym_block`` is ``[[c, 2y'], [x, A + JB]]`` (constant row sums
    are inherited from C) and ``orth_sym_block`` is the orthogonally similar
    ``[[c, sqrt2 y'], [sqrt2 x, A + JB]]``, always in float.
    """
    _check_blocks(blocks)
    A, B = blocks.A, blocks.B
    JB = _rows_flipped(B)
    plus = A + JB
    skew = A - JB
    if blocks.parity == "even":
        return ReducedForms(sym_block=plus, skew_block=skew)
    m = A.shape[0]
    dtype = object if is_exact(plus) or is_exact(blocks.x) else float
    S = np.empty((m + 1, m + 1), dtype=dtype)
    S[0, 0] = blocks.c
    S[0, 1:] = 2 * blocks.y
    S[1:, 0] = blocks.x
    S[1:, 1:] = plus
    O = np.array(to_float(S), dtype=float)
    O[0, 1:] /= 2.0
    O[0, 1:] *= math.sqrt(2.0)
    O[1:, 0] *= math.sqrt(2.0)
    return ReducedForms(sym_block=S, skew_block=skew, orth_sym_block=O)


def assemble_from_reduced(sym_plus, skew, parity: str, odd_border=None) -> np.ndarray:
    """Centrosymmetric matrix whose reduced forms are the given blocks.

    Even order returns ``1/2 [[S+K, (S-K)J], [J(S-K), J(S+K)J]]``.  In odd
    order ``odd_border = (x_col, y_row, c_center)`` supplies the border of the
    bordered symmetric block with ``y_row`` in the ``2y'`` convention.
    No sign checks are made here.
    """
    S, K = sym_plus, skew
    if S.shape != K.shape or S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ShapeError("sym_plus and skew must be square of equal size")
    A = (S + K) / 2
    B = _rows_flipped((S - K) / 2)
    if parity == "even":
        return assemble(CentroBlocks("even", A, B))
    if parity != "odd" or odd_border is None:
        raise ShapeError("odd assembly needs (x_col, y_row, c_center)")
    x_col, y_row, c_center = odd_border
    m = S.shape[0]
    if np.shape(x_col) != (m,) or np.shape(y_row) != (m,):
        raise ShapeError("border vectors must have length m")
    return assemble(CentroBlocks("odd", A, B, x=np.asarray(x_col).copy(),
                                 y=np.asarray(y_row) / 2, c=c_center))


def update_from_reduced(blocks: CentroBlocks, d_sym, d_skew=None) -> np.ndarray:
    """Assemble the matrix whose reduced blocks are the old ones plus updates.

    The new blocks are formed additively (``A + (dS + dK)/2`` and so on), so a
    nonnegative ``C`` with ``dS + dK >= 0`` and ``dS - dK >= 0`` gives an
    exactly nonnegative result even in float mode.  In odd order ``d_sym`` is
    ``(m+1) x (m+1)`` in the ``2y'`` convention.
    """
    m = blocks.m
    if d_skew is None:
        d_skew = zeros_like_mode((m, m), is_exact(d_sym))
    if blocks.parity == "even":
        dS = d_sym
        if dS.shape != (m, m):
            raise ShapeError("symmetric update has the wrong size")
    else:
        if d_sym.shape != (m + 1, m + 1):
            raise ShapeError("symmetric update has the wrong size")
        dS = d_sym[1:, 1:]
    if d_skew.shape != (m, m):
        raise ShapeError("skew update has the wrong size")
    A = blocks.A + (dS + d_skew) / 2
    B = blocks.B + _rows_flipped((dS - d_skew) / 2)
    if blocks.parity == "even":
        return assemble(CentroBlocks("even", A, B))
    return assemble(CentroBlocks(
        "odd", A, B,
        x=blocks.x + d_sym[1:, 0],
        y=blocks.y + d_sym[0, 1:] / 2,
        c=blocks.c + d_sym[0, 0],
    ))


def lift_symmetric(z, n: int) -> np.ndarray:
    """Lift an eigenvector of the (2y'-form) symmetric block to order n."""
    if n % 2 == 0:
        return np.concatenate([z, z[::-1]])
    return np.concatenate([z[1:], z[:1], z[1:][::-1]])

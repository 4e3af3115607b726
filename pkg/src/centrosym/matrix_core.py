"""Dense matrix values, the counteridentity and structural predicates.

Matrices and vectors are plain :class:`numpy.ndarray` objects.  Two
arithmetic modes coexist:

* float mode: ``float64`` arrays;
* exact mode: ``object`` arrays of :class:`fractions.Fraction`.

Constructions that only use ``+ - * /`` and ``max`` work unchanged on both,
so a rational input gives a bit-exact rational output.  Eigenvalue-dependent
code converts to float with :func:`to_float`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

import numpy as np

from .errors import PreconditionError, ShapeError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "as_vector",
    "is_exact",
    "to_float",
    "to_fraction",
    "counteridentity",
    "flip",
    "is_centrosymmetric",
    "centro_violation",
    "is_nonnegative",
    "min_entry",
    "row_sum_constant",
    "vector_symmetry_class",
    "max_abs",
    "matrix_to_json",
    "matrix_from_json",
    "vector_to_json",
    "vector_from_json",
    "scalar_to_json",
    "zeros_like_mode",
]


@dataclass(frozen=True)
class Tolerance:
    """Entrywise (structural) and eigenvalue-matching (spectral) tolerances."""

    structural_tol: float = 1e-12
    spectral_tol: float = 1e-8

    def __post_init__(self):
        if not (self.structural_tol >= 0 and self.spectral_tol >= 0):
            raise PreconditionError("tolerances must be nonnegative")


DEFAULT_TOL = Tolerance()


def to_fraction(x) -> Fraction:
    """Convert a scalar to an exact rational.

    Strings may be ``"p/q"`` or decimal literals; floats are read through
    their shortest decimal representation, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise PreconditionError(f"not a number: {x!r}")
    if isinstance(x, (int, np.integer, Rational)):
        return Fraction(int(x)) if isinstance(x, (int, np.integer)) else Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"not a rational literal: {x!r}") from exc
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise PreconditionError(f"non-finite entry: {x!r}")
        return Fraction(repr(float(x)))
    raise PreconditionError(f"cannot read {x!r} as an exact rational")


def _to_float(x) -> float:
    if isinstance(x, str):
        return float(to_fraction(x))
    if isinstance(x, bool) or not isinstance(x, (Real, np.floating, np.integer)):
        raise PreconditionError(f"not a real number: {x!r}")
    return float(x)


def is_exact(a) -> bool:
    """True for object arrays (the rational mode)."""
    return isinstance(a, np.ndarray) and a.dtype == object


def as_matrix(data, exact: bool | None = None) -> np.ndarray:
    """Build a validated 2-D array.

    Parameters
    ----------
    data : array_like
        Nested rows.
    exact : bool, optional
        Force rational (``True``) or float (``False``) storage.  When omitted
        the mode of an existing ndarray is kept and anything else is float.
    """
    if exact is None:
        exact = is_exact(data)
    if exact:
        rows = data.tolist() if isinstance(data, np.ndarray) else data
        arr = np.array([[to_fraction(v) for v in row] for row in rows], dtype=object)
        if arr.ndim != 2:
            raise ShapeError("matrix rows must have equal length")
    else:
        if is_exact(data):
            arr = np.vectorize(float, otypes=[float])(data) if data.size else data.astype(float)
        else:
            try:
                arr = np.array(data, dtype=float)
            except ValueError:
                arr = np.array([[_to_float(v) for v in row] for row in data], dtype=float)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise PreconditionError("matrix has non-finite entries")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ShapeError("matrix dimensions must be positive")
    return arr


def as_vector(data, exact: bool | None = None) -> np.ndarray:
    if exact is None:
        exact = is_exact(data)
    if exact:
        vals = data.tolist() if isinstance(data, np.ndarray) else list(data)
        arr = np.array([to_fraction(v) for v in vals], dtype=object)
    else:
        if is_exact(data):
            arr = np.array([float(v) for v in data], dtype=float)
        else:
            arr = np.array([_to_float(v) if isinstance(v, str) else v for v in data], dtype=float)
        if not np.all(np.isfinite(arr)):
            raise PreconditionError("vector has non-finite entries")
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeError(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    return arr


def to_float(a) -> np.ndarray:
    """Float copy of an array in either mode."""
    if is_exact(a):
        return np.array(a.tolist(), dtype=float).reshape(a.shape)
    return np.asarray(a, dtype=float)


def zeros_like_mode(shape, exact: bool) -> np.ndarray:
    """Zero array; exact zeros are ``Fraction(0)`` so ``0 / 2`` stays rational."""
    if exact:
        return np.full(shape, Fraction(0), dtype=object)
    return np.zeros(shape)


def max_abs(a) -> float:
    if a.size == 0:
        return 0.0
    if is_exact(a):
        return float(max(abs(v) for v in a.flat))
    return float(np.max(np.abs(a)))


def _require_square(M):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")


def counteridentity(n: int) -> np.ndarray:
    """The n x n flip matrix J (ones on the anti-diagonal)."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ShapeError(f"invalid dimension {n!r}")
    return np.eye(n)[::-1].copy()


def flip(M) -> np.ndarray:
    """J M J for matrices, J x for vectors; exact in both modes."""
    if M.ndim == 1:
        return M[::-1].copy()
    return M[::-1, ::-1].copy()


def centro_violation(M) -> float:
    """max |M_ij - M_{n-i+1, n-j+1}|."""
    _require_square(M)
    if is_exact(M):
        return max_abs(M - flip(M))
    return float(np.max(np.abs(M - M[::-1, ::-1])))


def is_centrosymmetric(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    return centro_violation(M) <= tol.structural_tol


def min_entry(M) -> float:
    if is_exact(M):
        return float(min(M.flat))
    return float(np.min(M))


def is_nonnegative(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    if is_exact(M):
        return min(M.flat) >= -to_fraction(tol.structural_tol)
    return min_entry(M) >= -tol.structural_tol


def row_sum_constant(M, tol: Tolerance = DEFAULT_TOL):
    """Common row sum when all rows agree within ``structural_tol``, else None.

    Exact inputs give an exact ``Fraction``.
    """
    _require_square(M)
    sums = M.sum(axis=1)
    if is_exact(M):
        if max(sums) - min(sums) > to_fraction(tol.structural_tol):
            return None
        return sum(sums, Fraction(0)) / len(sums)
    if np.max(sums) - np.min(sums) > tol.structural_tol:
        return None
    return float(np.mean(sums))


def vector_symmetry_class(x, tol: Tolerance = DEFAULT_TOL) -> str:
    """Return ``"symmetric"``, ``"skew_symmetric"`` or ``"neither"``.

    The zero vector is reported symmetric.
    """
    if x.ndim != 1:
        raise ShapeError("expected a vector")
    if max_abs(flip(x) - x) <= tol.structural_tol:
        return "symmetric"
    if max_abs(flip(x) + x) <= tol.structural_tol:
        return "skew_symmetric"
    return "neither"


# -- JSON ------------------------------------------------------------------

def scalar_to_json(v):
    if isinstance(v, Fraction):
        return str(v)
    return float(v)


def matrix_to_json(M) -> dict:
    if M.shape[0] != M.shape[1]:
        raise ShapeError("Matrix JSON carries square matrices only")
    return {"n": int(M.shape[0]), "data": [[scalar_to_json(v) for v in row] for row in M.tolist()]}


def matrix_from_json(obj, exact: bool = False) -> np.ndarray:
    try:
        data = obj["data"]
    except (TypeError, KeyError) as exc:
        raise PreconditionError("matrix JSON needs a 'data' field") from exc
    M = as_matrix(data, exact=exact)
    if "n" in obj and (M.shape != (obj["n"], obj["n"])):
        raise ShapeError(f"declared n={obj['n']} does not match data shape {M.shape}")
    return M


def vector_to_json(x) -> dict:
    return {"data": [scalar_to_json(v) for v in x.tolist()]}


def vector_from_json(obj, exact: bool = False) -> np.ndarray:
    try:
        return as_vector(obj["data"], exact=exact)
    except (TypeError, KeyError) as exc:
        raise PreconditionError("vector JSON needs a 'data' field") from exc

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centrosym.errors import PreconditionError, ShapeError
from centrosym.matrix_core import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_vector,
    counteridentity,
    is_centrosymmetric,
    is_nonnegative,
    matrix_from_json,
    matrix_to_json,
    row_sum_constant,
    to_fraction,
    vector_from_json,
    vector_symmetry_class,
    vector_to_json,
)


def test_counteridentity_small():
    assert counteridentity(2).tolist() == [[0, 1], [1, 0]]
    assert counteridentity(3).tolist() == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    J = counteridentity(4)
    assert np.array_equal(J @ J, np.eye(4))


def test_counteridentity_rejects_zero():
    with pytest.raises(PreconditionError):
        counteridentity(0)


@pytest.mark.parametrize("n", range(1, 65))
def test_counteridentity_involution_and_symmetric(n):
    J = counteridentity(n)
    assert np.array_equal(J, J.T)
    assert np.array_equal(J @ J, np.eye(n))


def test_is_centrosymmetric_examples():
    assert is_centrosymmetric(as_matrix([[1, 2], [2, 1]]))
    assert not is_centrosymmetric(as_matrix([[1, 2], [3, 1]]))
    assert is_centrosymmetric(as_matrix([[1, 2, 3], [4, 5, 4], [3, 2, 1]]))


def test_is_centrosymmetric_non_square():
    with pytest.raises(ShapeError):
        is_centrosymmetric(as_matrix([[1, 2, 3], [4, 5, 6]]))


def test_is_nonnegative_examples():
    assert is_nonnegative(as_matrix([[0, 1], [1, 0]]))
    assert is_nonnegative(as_matrix([[0, -1e-15], [1, 0]]), Tolerance(structural_tol=1e-12))
    assert not is_nonnegative(as_matrix([[-1, 0], [0, 0]]))


def test_row_sum_constant_examples():
    assert row_sum_constant(as_matrix([[1, 2], [2, 1]])) == 3
    assert row_sum_constant(as_matrix([[1, 2, 3], [4, 5, 4], [3, 2, 1]])) is None
    K4 = as_matrix(np.ones((4, 4)) - np.eye(4))
    assert row_sum_constant(K4) == 3


def test_row_sum_constant_exact_returns_rational():
    M = as_matrix([["1/2", "1/3"], ["1/3", "1/2"]], exact=True)
    assert row_sum_constant(M) == Fraction(5, 6)


def test_vector_symmetry_class_examples():
    assert vector_symmetry_class(as_vector([1, 2, 1])) == "symmetric"
    assert vector_symmetry_class(as_vector([1, 0, -1])) == "skew_symmetric"
    assert vector_symmetry_class(as_vector([1, 2, 3])) == "neither"
    assert vector_symmetry_class(as_vector([0, 0, 0])) == "symmetric"


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=20))
def test_symmetry_class_invariant_under_flip(xs):
    x = as_vector(xs)
    assert vector_symmetry_class(x[::-1].copy()) == vector_symmetry_class(x)


def test_non_finite_rejected():
    with pytest.raises(PreconditionError):
        as_matrix([[1.0, float("nan")], [0.0, 1.0]])
    with pytest.raises(PreconditionError):
        as_vector([float("inf")])


def test_tolerance_must_be_nonnegative():
    with pytest.raises(PreconditionError):
        Tolerance(structural_tol=-1.0)


def test_to_fraction_reads_decimal_and_ratio_strings():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(0.1) == Fraction(1, 10)
    with pytest.raises(PreconditionError):
        to_fraction("pi")


def test_json_round_trip_exact():
    M = as_matrix([["1/2", 0], [0, "1/2"]], exact=True)
    obj = matrix_to_json(M)
    assert obj == {"n": 2, "data": [["1/2", "0"], ["0", "1/2"]]}
    assert np.array_equal(matrix_from_json(obj, exact=True), M)
    v = as_vector(["1/3", 2], exact=True)
    assert np.array_equal(vector_from_json(vector_to_json(v), exact=True), v)


def test_json_declared_size_mismatch():
    with pytest.raises(ShapeError):
        matrix_from_json({"n": 3, "data": [[1, 0], [0, 1]]})


@settings(max_examples=50)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_flip_assembly_is_centrosymmetric(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.random((n, n))
    C = M + M[::-1, ::-1]
    assert is_centrosymmetric(C, Tolerance(structural_tol=0.0))
    assert DEFAULT_TOL.structural_tol == 1e-12

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centrosym.centro_decomp import reduced_forms, split
from centrosym.centro_perturb import guo_complex, guo_real, prepare, shift_perron, stochastic_form
from centrosym.errors import BoundViolation, MembershipError, PreconditionError, StructureError
from centrosym.matrix_core import Tolerance, as_matrix, centro_violation, min_entry, to_float
from centrosym.spectral_engine import Spectrum, match_spectra, spectrum
from centrosym.suite import random_centrosymmetric

C4 = [[1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 1, 0, 1]]
K4 = (np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)).tolist()


def same(a, b, tol=1e-8):
    ok, dist, _ = match_spectra(Spectrum.from_complex(a), Spectrum.from_complex(b), Tolerance(spectral_tol=tol))
    assert ok, dist


# -- stochastic form -------------------------------------------------------------

def test_stochastic_form_keeps_constant_rows():
    C = as_matrix([[0, 2], [2, 0]])
    assert stochastic_form(C) is C
    K = as_matrix(K4)
    assert stochastic_form(K) is K


def test_stochastic_form_odd_example():
    C = as_matrix([[1, 2, 3], [4, 5, 4], [3, 2, 1]])
    B = stochastic_form(C)
    rho = (9 + math.sqrt(65)) / 2
    assert np.max(np.abs(B.sum(axis=1) - rho)) <= 1e-8 * (1 + rho)
    same(spectrum(B).as_complex(), spectrum(C).as_complex(), 1e-6)
    assert centro_violation(B) == 0 and B.min() >= 0


def test_stochastic_form_rejects_negative():
    with pytest.raises(PreconditionError):
        stochastic_form(as_matrix([[-1, 1], [1, -1]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_stochastic_form_properties(n, seed):
    C = random_centrosymmetric(np.random.default_rng(seed), n)
    B, eps, dist = stochastic_form(C, return_info=True)
    lam1 = max(abs(z) for z in spectrum(C).as_complex())
    assert np.max(np.abs(B.sum(axis=1) - lam1)) <= 1e-8 * (1 + lam1)
    same(spectrum(B).as_complex(), spectrum(C).as_complex(), 1e-6)
    assert centro_violation(B) == 0 and B.min() >= 0
    assert stochastic_form(B) is B


# -- Perron shift ----------------------------------------------------------------

def test_shift_up_example():
    X = shift_perron(as_matrix([[0, 1], [1, 0]], exact=True), 2, "up")
    assert X.tolist() == [[1, 2], [2, 1]]
    same(spectrum(X).as_complex(), [3, -1])


def test_shift_down_example_at_the_bound():
    # eps equals n * min entry here, so the boundary has to be admitted explicitly
    C = as_matrix([[1, 2], [2, 1]], exact=True)
    with pytest.raises(BoundViolation):
        shift_perron(C, 2, "down")
    X = shift_perron(C, 2, "down", allow_equal=True)
    assert X.tolist() == [[0, 1], [1, 0]]
    same(spectrum(X).as_complex(), [1, -1])


def test_shift_zero():
    C = as_matrix([[1, 2], [2, 1]], exact=True)
    assert np.array_equal(shift_perron(C, 0, "down"), C)
    assert np.array_equal(shift_perron(C, 0, "up"), C)


def test_shift_needs_constant_rows():
    with pytest.raises(PreconditionError):
        shift_perron(as_matrix([[1, 2, 3], [4, 5, 4], [3, 2, 1]]), 1, "up")


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.fractions(0, 20))
def test_shift_round_trip_exact(n, seed, eps):
    rng = np.random.default_rng(seed)
    C = random_centrosymmetric(rng, n)
    sums = C.sum(axis=1)
    C = as_matrix(C + np.diag(sums.max() - sums), exact=True)
    C = as_matrix([[Fraction(v).limit_denominator(1000) for v in row] for row in C.tolist()], exact=True)
    sums = C.sum(axis=1)
    C = C + np.diag(np.array([max(sums) - s for s in sums], dtype=object))
    # a positive base keeps eps strictly inside the descent bound of C + eps/n
    C = shift_perron(C, 1, "up")
    assert np.array_equal(shift_perron(shift_perron(C, eps, "up"), eps, "down"), C)
    up = shift_perron(C, eps, "up")
    bound = n * min(up.flat)
    with pytest.raises(BoundViolation):
        shift_perron(up, bound + Fraction(1, 10**6), "down")


# -- guo_real ----------------------------------------------------------------------

def test_guo_real_two_by_two_plus():
    rep = guo_real(as_matrix([[2, 1], [1, 2]], exact=True), 1, 1, "plus")
    assert rep.output.tolist() == [[3, 1], [1, 3]]
    assert rep.case_path == "even_skew" and rep.perron_shift == 1
    same(spectrum(rep.output).as_complex(), [4, 2])


def test_guo_real_two_by_two_minus():
    rep = guo_real(as_matrix([[2, 1], [1, 2]], exact=True), 1, 1, "minus")
    assert rep.output.tolist() == [[2, 2], [2, 2]]
    same(spectrum(rep.output).as_complex(), [4, 0])


def test_guo_real_sym_block_example():
    rep = guo_real(as_matrix(K4, exact=True), -1, 1, "plus", block="sym")
    h = Fraction(1, 2)
    assert rep.output.tolist() == [[h, 1, 1, 3 * h], [1, h, 3 * h, 1], [1, 3 * h, h, 1], [3 * h, 1, 1, h]]
    assert rep.case_path == "even_sym"
    same(spectrum(rep.output).as_complex(), [4, 0, -1, -1])


def test_guo_real_prefers_skew_for_shared_eigenvalue():
    rep = guo_real(as_matrix(K4, exact=True), -1, 1, "plus")
    assert rep.case_path == "even_skew"
    same(spectrum(rep.output).as_complex(), [4, 0, -1, -1], 1e-7)


def test_guo_real_missing_eigenvalue():
    with pytest.raises(MembershipError):
        guo_real(as_matrix([[2, 1], [1, 2]]), 0.5, 1, "plus")


def test_guo_real_rejects_non_centrosymmetric():
    with pytest.raises(StructureError):
        guo_real(as_matrix([[1, 2], [3, 1]]), 1, 1, "plus")


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1), st.sampled_from([0.0, 0.1, 1.0, 10.0]),
       st.sampled_from(["plus", "minus"]))
def test_guo_real_random(n, seed, t, sign):
    C = random_centrosymmetric(np.random.default_rng(seed), n)
    prep = prepare(C, Tolerance(1e-12, 1e-6))
    vals = spectrum(prep.B).as_complex()
    i_rho = int(np.argmin(np.abs(vals - float(prep.rho))))
    reals = [z.real for i, z in enumerate(vals) if i != i_rho and abs(z.imag) < 1e-10]
    if not reals:
        return
    rep = guo_real(prep, reals[0], t, sign)
    X = rep.output
    assert rep.cert.ok and min_entry(X) >= -1e-12 and centro_violation(X) == 0
    assert rep.cert.spectral_mismatch < 1e-6
    if rep.case_path.endswith("skew"):
        lam1 = max(z.real for z in spectrum(X).as_complex())
        assert abs(lam1 - float(prep.rho) - t) <= 1e-9 * max(1.0, lam1)
    else:
        before = reduced_forms(split(to_float(prep.B))).sym_block
        after = reduced_forms(split(to_float(X))).sym_block
        assert np.min(after - before) >= -1e-12


# -- guo_complex -------------------------------------------------------------------

def test_guo_complex_minus_example():
    rep = guo_complex(as_matrix(C4), 1, 1, 1, "minus")
    assert rep.case_path == "even_skew" and rep.perron_shift == 2
    assert rep.cert.ok
    same(spectrum(rep.output).as_complex(), [4, 1j, -1j, 0])


def test_guo_complex_plus_example():
    rep = guo_complex(as_matrix(C4), 1, 1, 0.5, "plus")
    assert rep.perron_shift == 1 and rep.delta_used == 2
    same(spectrum(rep.output).as_complex(), [3, 1.5 + 1j, 1.5 - 1j, 0])


def test_guo_complex_zero_t():
    C = as_matrix(C4)
    rep = guo_complex(C, 1, 1, 0, "plus")
    assert np.array_equal(rep.output, stochastic_form(C)) and rep.perron_shift == 0


def test_guo_complex_missing_pair():
    with pytest.raises(MembershipError):
        guo_complex(as_matrix(C4), 1, 2, 1, "plus")


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 12), st.integers(0, 2**32 - 1), st.sampled_from([0.1, 1.0, 10.0]),
       st.sampled_from(["plus", "minus"]))
def test_guo_complex_random(n, seed, t, sign):
    C = random_centrosymmetric(np.random.default_rng(seed), n)
    prep = prepare(C, Tolerance(1e-12, 1e-6))
    pairs = [z for z in prep.input_vals if z.imag > 1e-8]
    if not pairs:
        return
    z = pairs[0]
    rep = guo_complex(prep, z.real, z.imag, t, sign)
    assert rep.cert.ok and centro_violation(rep.output) == 0
    if rep.case_path.endswith("skew"):
        assert rep.perron_shift == 2 * t
    else:
        assert rep.sym_excess >= -1e-12

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centrosym.errors import ShapeError
from centrosym.matrix_core import Tolerance, as_matrix, counteridentity
from centrosym.spectral_engine import Spectrum, certify, match_spectra, perron_pair, spectrum
from centrosym.suite import random_centrosymmetric

from oracles import charpoly_exact, eigenvalues_oracle


def sorted_complex(z):
    return sorted(np.asarray(z, dtype=complex), key=lambda w: (round(w.real, 9), round(w.imag, 9)))


def assert_same_multiset(a, b, tol):
    ok, dist, _ = match_spectra(Spectrum.from_complex(a), Spectrum.from_complex(b), Tolerance(spectral_tol=tol))
    assert ok, dist


# -- oracle sanity -------------------------------------------------------------

def test_charpoly_oracle_small():
    # det(xI - [[1,2],[3,4]]) = x^2 - 5x - 2
    assert charpoly_exact([[1, 2], [3, 4]]) == [1, -5, -2]


def test_eigenvalue_oracle_repeated_root():
    roots = eigenvalues_oracle([[2, 1], [0, 2]])
    assert np.allclose(roots, [2, 2])


# -- spectrum ---------------------------------------------------------------

def test_spectrum_swap():
    assert_same_multiset(spectrum(as_matrix([[0, 1], [1, 0]])).as_complex(), [1, -1], 1e-12)


def test_spectrum_complex_pair():
    assert_same_multiset(spectrum(as_matrix([[1, -1], [1, 1]])).as_complex(), [1 + 1j, 1 - 1j], 1e-12)


def test_spectrum_cyclic_permutation():
    w = complex(-0.5, math.sqrt(3) / 2)
    got = spectrum(as_matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
    assert_same_multiset(got.as_complex(), [1, w, w.conjugate()], 1e-12)
    assert got.is_conjugate_closed()


def test_spectrum_exact_input():
    got = spectrum(as_matrix([["1/2", 0], [0, "1/3"]], exact=True))
    assert_same_multiset(got.as_complex(), [0.5, 1 / 3], 1e-14)


@pytest.mark.parametrize("seed", range(40))
def test_spectrum_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    M = rng.integers(-9, 10, size=(n, n))
    assert_same_multiset(spectrum(as_matrix(M)).as_complex(), eigenvalues_oracle(M.tolist()), 1e-7)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_spectrum_conjugate_closed_and_sized(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    s = spectrum(M)
    assert len(s) == n
    assert s.is_conjugate_closed()
    assert_same_multiset(s.as_complex(), np.linalg.eigvals(M), 1e-7 * max(1.0, np.abs(M).sum(1).max()))


# -- Perron pairs ----------------------------------------------------------------

def test_perron_all_ones():
    pp = perron_pair(as_matrix([[1, 1], [1, 1]]))
    assert pp.rho == pytest.approx(2)
    assert np.allclose(pp.vector, [1, 1])


def test_perron_constant_rows():
    pp = perron_pair(as_matrix([[2, 1], [1, 2]]))
    assert pp.rho == pytest.approx(3)
    assert np.allclose(pp.vector, [1, 1])


def test_perron_odd_centrosymmetric():
    pp = perron_pair(as_matrix([[1, 2, 3], [4, 5, 4], [3, 2, 1]]))
    assert pp.rho == pytest.approx((9 + math.sqrt(65)) / 2, rel=1e-12)
    x = pp.vector
    assert x[0] == x[2] and x[1] == 1.0 and 0 < x[0] < 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_perron_dominates_spectrum_and_is_symmetric(n, seed):
    C = random_centrosymmetric(np.random.default_rng(seed), n)
    pp = perron_pair(C)
    radius = max(abs(z) for z in spectrum(C).as_complex())
    assert pp.rho >= radius - 1e-8
    assert pp.vector.min() >= 0
    assert np.max(np.abs(pp.vector[::-1] - pp.vector)) <= 1e-8
    assert pp.residual <= 1e-8 * max(1.0, np.abs(C).sum(1).max())


# -- matching ----------------------------------------------------------------------

def test_match_permutation():
    ok, dist, _ = match_spectra(Spectrum.from_complex([1, -1]), Spectrum.from_complex([-1, 1]))
    assert ok and dist == 0


def test_match_tiny_offset():
    ok, dist, _ = match_spectra(Spectrum.from_complex([1]), Spectrum.from_complex([1 + 1e-12]),
                                Tolerance(spectral_tol=1e-8))
    assert ok and dist == pytest.approx(1e-12, rel=1e-3)


def test_match_failure():
    ok, dist, _ = match_spectra(Spectrum.from_complex([1, 2]), Spectrum.from_complex([1, 3]))
    assert not ok and dist == pytest.approx(1)


def test_match_size_mismatch():
    with pytest.raises(ShapeError):
        match_spectra(Spectrum.from_complex([1]), Spectrum.from_complex([1, 2]))


@settings(max_examples=50)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=8), st.floats(0, 1e-3))
def test_match_symmetric_verdict(zs, shift):
    a = Spectrum.from_complex(zs)
    b = Spectrum.from_complex([z + shift for z in zs][::-1])
    tol = Tolerance(spectral_tol=5e-4)
    assert match_spectra(a, b, tol)[0] == match_spectra(b, a, tol)[0]


# -- certification -----------------------------------------------------------------

def test_certify_all_ones_minus_identity():
    M = as_matrix(np.ones((4, 4)) - np.eye(4))
    rep = certify(M, Spectrum.from_complex([3, -1, -1, -1]))
    assert rep.ok and rep.nonneg_ok and rep.centro_ok and rep.spectrum_ok


def test_certify_not_centrosymmetric():
    rep = certify(as_matrix([[1, 2], [3, 1]]), Spectrum.from_complex([1 + math.sqrt(6), 1 - math.sqrt(6)]))
    assert not rep.centro_ok and rep.spectrum_ok


def test_certify_negative_entry():
    rep = certify(as_matrix([[-1]]), Spectrum.from_complex([-1]))
    assert not rep.nonneg_ok and rep.spectrum_ok


def test_certify_json_fields():
    rep = certify(counteridentity(2).astype(float), Spectrum.from_complex([1, -1]))
    body = rep.to_json()
    assert body["ok"] and set(body) >= {"nonneg_ok", "centro_ok", "spectrum_ok", "spectral_mismatch", "pairing"}

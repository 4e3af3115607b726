"""The ten acceptance criteria, each at its stated tolerance.

A summary line per criterion is printed at the end of the pytest session.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from centrosym.centro_perturb import guo_complex, shift_perron
from centrosym.errors import BoundViolation
from centrosym.matrix_core import Tolerance, as_matrix, centro_violation, min_entry
from centrosym.realize import realize_L4
from centrosym.spectral_engine import Spectrum, match_spectra, spectrum
from centrosym.suite import (
    decomposition_ensemble,
    dominating_complex_ensemble,
    exact_guo_ensemble,
    guo_ensemble,
    sfc_ensemble,
    shift_ensemble,
)

from oracles import eigenvalues_oracle

SEED = 7


@pytest.fixture(scope="module")
def full_guo():
    return guo_ensemble(SEED, 200, with_complex=True)


def test_criterion_01_golden_realization(criterion):
    start = time.perf_counter()
    res = realize_L4(Spectrum.from_pairs([[-1, 0], [-1, 0], [-1, 0]], exact=True))
    elapsed = time.perf_counter() - start
    target = np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)
    exact = all(type(v) is Fraction for v in res.matrix.flat) and res.matrix.tolist() == target.tolist()
    ok = res.perron_value == 3 and exact and elapsed < 1.0
    criterion(1, ok, f"perron={res.perron_value} bit-exact={exact} time={elapsed:.3f}s")
    assert ok


def test_criterion_02_golden_complex_perturbation(criterion):
    C = as_matrix([[1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 1, 0, 1]])
    start = time.perf_counter()
    rep = guo_complex(C, 1, 1, 1, "minus")
    elapsed = time.perf_counter() - start
    X = rep.output
    ok_spec, dist, _ = match_spectra(Spectrum.from_complex([4, 1j, -1j, 0]), spectrum(X),
                                     Tolerance(spectral_tol=1e-8))
    ok = (rep.cert.ok and min_entry(X) >= 0 and centro_violation(X) == 0 and ok_spec
          and rep.perron_shift == 2 and elapsed < 1.0)
    criterion(2, ok, f"mismatch={dist:.2e} shift={rep.perron_shift} path={rep.case_path} time={elapsed:.3f}s")
    assert ok


def test_criterion_03_guo_real_ensemble(criterion):
    start = time.perf_counter()
    res = guo_ensemble(SEED, 200, with_complex=False)
    elapsed = time.perf_counter() - start
    exact = exact_guo_ensemble(SEED)
    real = res["real"]
    ok = (real["passed"] == real["runs"] and real["failure_count"] == 0
          and real["min_entry"]["min"] >= -1e-12 and real["spectral_mismatch"]["max"] < 1e-6
          and exact["passed"] == exact["runs"] and elapsed < 60.0)
    criterion(3, ok, f"float {real['passed']}/{real['runs']} max_mismatch={real['spectral_mismatch']['max']:.2e} "
                     f"min_entry={real['min_entry']['min']:.2e} rational {exact['passed']}/{exact['runs']} "
                     f"time={elapsed:.1f}s")
    assert ok


def test_criterion_04_skew_complex_shift(criterion, full_guo):
    cx = full_guo["complex"]
    err = cx["skew_shift_error"]
    ok = err["count"] > 0 and err["max"] <= 1e-9 and cx["passed"] == cx["runs"]
    criterion(4, ok, f"skew-path runs={err['count']} max |shift-2t|={err['max']:.2e} "
                     f"(against the input spectrum: {cx['skew_shift_error_vs_input']['max']:.2e})")
    assert ok


def test_criterion_05_domination(criterion, full_guo):
    real = full_guo["real"]["sym_path_min_excess"]
    cx = full_guo["complex"]["sym_path_min_excess"]
    worst = min(real.get("min", 0.0), cx.get("min", 0.0))
    ok = real["count"] > 0 and worst >= -1e-12
    criterion(5, ok, f"sym-path runs real={real['count']} complex={cx['count']} min excess={worst:.2e}")
    assert ok


def test_criterion_06_stochastic_form(criterion):
    res = sfc_ensemble(SEED, 100)
    ok = res["passed"] == res["count"] == 100
    criterion(6, ok, f"{res['passed']}/{res['count']} max rel row error={res['relative_row_sum_error']['max']:.2e} "
                     f"max spectral error={res['spectral_error']['max']:.2e}")
    assert ok


def test_criterion_07_decomposition(criterion):
    res = decomposition_ensemble(SEED, 500)
    ok = res["passed"] == res["count"] == 500
    criterion(7, ok, f"{res['passed']}/{res['count']} max spectral error={res['spectral_error']['max']:.2e}")
    assert ok


def test_criterion_08_engine_oracle(criterion):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    passed = 0
    for _ in range(200):
        n = int(rng.integers(1, 6))
        M = rng.integers(-9, 10, size=(n, n))
        ok, dist, _ = match_spectra(Spectrum.from_complex(eigenvalues_oracle(M.tolist())),
                                    spectrum(as_matrix(M)), Tolerance(spectral_tol=1e-7))
        passed += int(ok)
        worst = max(worst, dist)
    ok = passed == 200
    criterion(8, ok, f"{passed}/200 max distance={worst:.2e}")
    assert ok


def test_criterion_09_shift_round_trip(criterion):
    res = shift_ensemble(SEED, 50)
    C = as_matrix([[1, 2], [2, 1]], exact=True)
    up = shift_perron(C, Fraction(3, 7), "up")
    identity = np.array_equal(shift_perron(up, Fraction(3, 7), "down"), C)
    try:
        shift_perron(C, 2 + Fraction(1, 10**9), "down")
        guarded = False
    except BoundViolation:
        guarded = True
    ok = res["identity"] == res["bound_enforced"] == res["count"] and identity and guarded
    criterion(9, ok, f"identity {res['identity']}/{res['count']} bound enforced "
                     f"{res['bound_enforced']}/{res['count']}")
    assert ok


def test_criterion_10_dominating_complex(criterion, full_guo):
    res = dominating_complex_ensemble(SEED, 100)
    ratio = res["shift_over_t"]
    ok = res["runs"] > 0 and res["spectrum_exact"] == res["runs"] and res["spectral_error"]["max"] < 1e-6
    sym = full_guo["complex"]["sym_path_shift_over_t"]
    criterion(10, ok, f"exact {res['spectrum_exact']}/{res['runs']} max error={res['spectral_error']['max']:.2e} "
                      f"shift/t max={ratio['max']:.2f} mean={ratio['mean']:.2f} over 4t={res['over_4t']}; "
                      f"guo sym path shift/t max={sym.get('max', 0.0):.2f} over 4t="
                      f"{full_guo['complex']['sym_path_over_4t']}")
    assert ok

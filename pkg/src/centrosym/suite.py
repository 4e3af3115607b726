"""Seeded random ensembles and their property checks.

Every generator draws from ``numpy.random.default_rng(seed)``, so a seed
fixes the whole run.  Each ``*_ensemble`` function returns a plain dict of
counts and residual statistics suitable for JSON.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .centro_decomp import CentroBlocks, assemble, reduced_forms, split
from .centro_perturb import guo_complex, guo_real, prepare, shift_perron, stochastic_form
from .errors import BoundViolation, CentroError
from .matrix_core import DEFAULT_TOL, Tolerance, centro_violation, is_exact, min_entry
from .perturb_kernels import complex_eigenpair, dominating_complex
from .realize import in_ctilde, realize_L4
from .spectral_engine import Spectrum, match_spectra, spectrum

__all__ = [
    "random_centrosymmetric",
    "random_gamma",
    "guo_ensemble",
    "exact_guo_ensemble",
    "sfc_ensemble",
    "decomposition_ensemble",
    "shift_ensemble",
    "realize_ensemble",
    "dominating_complex_ensemble",
    "run_suite",
]

ENSEMBLE_TOL = Tolerance(structural_tol=1e-12, spectral_tol=1e-6)
T_VALUES = (0.0, 0.1, 1.0, 10.0)
SIGNS = ("plus", "minus")


def random_centrosymmetric(rng, n: int) -> np.ndarray:
    """Nonnegative centrosymmetric matrix assembled from random blocks.

    Entries are uniform on [0, 1] times a Bernoulli mask whose density is
    itself uniform on [0.6, 1].
    """
    m = n // 2
    density = rng.uniform(0.6, 1.0)

    def draw(*shape):
        return rng.random(shape) * (rng.random(shape) < density)

    if n % 2 == 0:
        return assemble(CentroBlocks("even", draw(m, m), draw(m, m)))
    return assemble(CentroBlocks("odd", draw(m, m), draw(m, m), x=draw(m), y=draw(m),
                                 c=float(draw(1)[0])))


def random_gamma(rng, n: int, exact: bool = False, reals_only: bool = False) -> Spectrum:
    """Random list of n - 1 values that passes :func:`in_ctilde`.

    Exact lists use rationals with denominators up to 8.
    """
    k = n - 1
    while True:
        p = 0 if reals_only else int(rng.integers(0, k // 2 + 1))
        r = k - 2 * p
        if r == 0 and p % 2 == 1:
            continue
        break
    if exact:
        num = lambda: Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 9)))
        pos = lambda: Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
    else:
        num = lambda: float(rng.uniform(-1.0, 1.0))
        pos = lambda: float(rng.uniform(0.1, 1.0))
    vals = [(num(), num() * 0) for _ in range(r)]
    for _ in range(p):
        re, im = num(), pos()
        vals += [(re, im), (re, -im)]
    return Spectrum(tuple(vals))


def _real_non_perron(vals, rho, tol=1e-10):
    """Real eigenvalues with one copy of the Perron root removed."""
    reals = sorted((float(z.real) for z in vals if abs(z.imag) <= tol), reverse=True)
    i = int(np.argmin([abs(v - rho) for v in reals]))
    return reals[:i] + reals[i + 1:]


def _upper_pairs(vals, tol=1e-10):
    return [z for z in vals if z.imag > tol]


def _stats(xs):
    xs = [float(x) for x in xs]
    if not xs:
        return {"count": 0}
    return {"count": len(xs), "min": min(xs), "max": max(xs), "mean": float(np.mean(xs))}


def guo_ensemble(seed: int = 7, count: int = 200, ts=T_VALUES, tol: Tolerance = ENSEMBLE_TOL,
                 with_complex: bool = True) -> dict:
    """Real and complex perturbations over random matrices with n in 2..12.

    Real part: every real non-Perron eigenvalue, every t, both signs.
    Complex part: every conjugate pair, every positive t, both signs.
    """
    rng = np.random.default_rng(seed)
    real_runs = real_pass = 0
    real_fail = []
    mismatches, min_entries, sym_excess = [], [], []
    skew_shift_err, skew_shift_err_input, sym_complex_ratio = [], [], []
    complex_runs = complex_pass = 0
    complex_fail = []
    over_budget = 0
    complex_excess = []
    for idx in range(count):
        n = int(rng.integers(2, 13))
        C = random_centrosymmetric(rng, n)
        try:
            prep = prepare(C, tol)
        except CentroError as exc:
            real_fail.append({"instance": idx, "error": str(exc)})
            continue
        rho = float(prep.rho)
        lam1 = max(float(z.real) for z in prep.input_vals)
        # Perron root of the normalized matrix the construction acts on
        lam1_norm = rho if prep.eps == 0 else max(float(z.real) for z in spectrum(prep.B).as_complex())
        for lam in _real_non_perron(prep.input_vals, rho):
            for t in ts:
                for sign in SIGNS:
                    real_runs += 1
                    try:
                        rep = guo_real(prep, lam, t, sign)
                    except CentroError as exc:
                        real_fail.append({"instance": idx, "lambda2": lam, "t": t, "sign": sign,
                                          "error": f"{type(exc).__name__}: {exc}"})
                        continue
                    X = rep.output
                    ok = (rep.cert.ok and min_entry(X) >= -1e-12
                          and centro_violation(X) == 0 and rep.cert.spectral_mismatch < 1e-6)
                    real_pass += int(ok)
                    mismatches.append(rep.cert.spectral_mismatch)
                    min_entries.append(min_entry(X))
                    if rep.case_path.endswith("sym"):
                        sym_excess.append(rep.sym_excess)
        if not with_complex:
            continue
        for z in _upper_pairs(prep.input_vals):
            for t in ts:
                if t == 0:
                    continue
                for sign in SIGNS:
                    complex_runs += 1
                    try:
                        rep = guo_complex(prep, z.real, z.imag, t, sign)
                    except CentroError as exc:
                        complex_fail.append({"instance": idx, "pair": [z.real, z.imag], "t": t,
                                             "sign": sign, "error": f"{type(exc).__name__}: {exc}"})
                        continue
                    complex_pass += int(rep.cert.ok)
                    new_lam1 = max(float(w.real) for w in spectrum(rep.output).as_complex())
                    if rep.case_path.endswith("skew"):
                        skew_shift_err.append(abs(new_lam1 - lam1_norm - 2 * t))
                        skew_shift_err_input.append(abs(new_lam1 - lam1 - 2 * t))
                    else:
                        sym_complex_ratio.append(rep.perron_shift / t)
                        complex_excess.append(rep.sym_excess)
                        over_budget += int(rep.perron_shift > 4 * t * (1 + 1e-12))
    return {
        "seed": seed,
        "count": count,
        "real": {
            "runs": real_runs,
            "passed": real_pass,
            "failures": real_fail[:20],
            "failure_count": len(real_fail),
            "spectral_mismatch": _stats(mismatches),
            "min_entry": _stats(min_entries),
            "sym_path_min_excess": _stats(sym_excess),
        },
        "complex": {
            "runs": complex_runs,
            "passed": complex_pass,
            "failures": complex_fail[:20],
            "failure_count": len(complex_fail),
            "skew_shift_error": _stats(skew_shift_err),
            "skew_shift_error_vs_input": _stats(skew_shift_err_input),
            "sym_path_shift_over_t": _stats(sym_complex_ratio),
            "sym_path_min_excess": _stats(complex_excess),
            "sym_path_over_4t": int(over_budget),
        },
    }


def exact_guo_ensemble(seed: int = 7, count: int = 20, ts=(0, Fraction(1, 10), 1, 10)) -> dict:
    """Rational pipeline: realize a rational real list, then perturb exactly."""
    rng = np.random.default_rng(seed)
    runs = passed = 0
    failures = []
    for idx in range(count):
        n = int(rng.integers(2, 8))
        gamma = random_gamma(rng, n, exact=True, reals_only=True)
        C = realize_L4(gamma).matrix
        for lam in sorted({re for re, _ in gamma.values}):
            for t in ts:
                for sign in SIGNS:
                    runs += 1
                    try:
                        X = guo_real(C, lam, t, sign).output
                    except CentroError as exc:
                        failures.append({"instance": idx, "error": str(exc)})
                        continue
                    ok = is_exact(X) and centro_violation(X) == 0 and min(X.flat) >= 0
                    passed += int(ok)
    return {"seed": seed, "count": count, "runs": runs, "passed": passed, "failures": failures[:20]}


def sfc_ensemble(seed: int = 7, count: int = 100, tol: Tolerance = DEFAULT_TOL) -> dict:
    rng = np.random.default_rng(seed)
    passed = 0
    row_err, spec_err = [], []
    failures = []
    for idx in range(count):
        n = int(rng.integers(2, 13))
        C = random_centrosymmetric(rng, n)
        try:
            B = stochastic_form(C, tol)
        except CentroError as exc:
            failures.append({"instance": idx, "error": str(exc)})
            continue
        sc = spectrum(C)
        lam1 = max(abs(z) for z in sc.as_complex())
        sums = B.sum(axis=1)
        r_err = float(np.max(np.abs(sums - lam1)))
        _, s_err, _ = match_spectra(sc, spectrum(B), tol)
        again = stochastic_form(B, tol)
        ok = (r_err <= 1e-8 * (1 + lam1) and s_err < 1e-6 and again is B)
        passed += int(ok)
        row_err.append(r_err / (1 + lam1))
        spec_err.append(s_err)
        if not ok:
            failures.append({"instance": idx, "row_err": r_err, "spec_err": s_err})
    return {"seed": seed, "count": count, "passed": passed, "relative_row_sum_error": _stats(row_err),
            "spectral_error": _stats(spec_err), "failures": failures[:20]}


def decomposition_ensemble(seed: int = 7, count: int = 500) -> dict:
    rng = np.random.default_rng(seed)
    passed = 0
    errs = []
    for _ in range(count):
        n = int(rng.integers(2, 13))
        C = random_centrosymmetric(rng, n)
        blocks = split(C)
        red = reduced_forms(blocks)
        both = Spectrum(spectrum(red.sym_block).values + spectrum(red.skew_block).values)
        ok, dist, _ = match_spectra(spectrum(C), both, Tolerance(spectral_tol=1e-7))
        roundtrip = np.array_equal(assemble(blocks), C)
        passed += int(ok and roundtrip)
        errs.append(dist)
    return {"seed": seed, "count": count, "passed": passed, "spectral_error": _stats(errs)}


def shift_ensemble(seed: int = 7, count: int = 50) -> dict:
    """Up-then-down identity on rational matrices and the descent bound."""
    rng = np.random.default_rng(seed)
    identity = guarded = 0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        C = realize_L4(random_gamma(rng, n, exact=True)).matrix
        C = shift_perron(C, Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5))), "up")
        eps = Fraction(int(rng.integers(0, 20)), int(rng.integers(1, 7)))
        identity += int(np.array_equal(shift_perron(shift_perron(C, eps, "up"), eps, "down"), C))
        bound = n * min(C.flat)
        hard = 0
        for bad in (bound, bound + Fraction(1, 1000)):
            try:
                shift_perron(C, bad, "down")
            except BoundViolation:
                hard += 1
        guarded += int(hard == 2)
    return {"seed": seed, "count": count, "identity": identity, "bound_enforced": guarded}


def realize_ensemble(seed: int = 7, count: int = 100) -> dict:
    rng = np.random.default_rng(seed)
    passed = 0
    failures = []
    for idx in range(count):
        n = int(rng.integers(2, 10))
        gamma = random_gamma(rng, n)
        try:
            res = realize_L4(gamma, ENSEMBLE_TOL)
        except CentroError as exc:
            failures.append({"instance": idx, "error": str(exc)})
            continue
        bound_ok = res.perron_value >= max(abs(z) for z in gamma.as_complex()) - 1e-12
        passed += int(res.cert.ok and bound_ok and in_ctilde(gamma))
    return {"seed": seed, "count": count, "passed": passed, "failures": failures[:20]}


def dominating_complex_ensemble(seed: int = 7, count: int = 100, ts=(0.1, 1.0, 10.0)) -> dict:
    """Direct rank-three updates on random constant row sum matrices (n in 3..8)."""
    rng = np.random.default_rng(seed)
    runs = exact = 0
    ratios, errs = [], []
    over = []
    for idx in range(count):
        n = int(rng.integers(3, 9))
        M = rng.random((n, n)) * (rng.random((n, n)) < rng.uniform(0.6, 1.0))
        Y = M + np.diag(M.sum(axis=1).max() - M.sum(axis=1))  # constant row sums, nonnegative
        vals = spectrum(Y).as_complex()
        lam1 = float(Y.sum(axis=1).mean())
        for z in _upper_pairs(vals):
            if sum(abs(w - z) < 1e-7 for w in vals) > 1:
                continue
            pair = complex_eigenpair(Y, z.real, z.imag)
            for t in ts:
                for sign in SIGNS:
                    runs += 1
                    X, cert = dominating_complex(Y, pair, t, sign, budget=4)
                    moved = z.real - t if sign == "minus" else z.real + t
                    target = []
                    used_p = used_z = used_c = False
                    for w in vals:
                        if not used_p and abs(w - lam1) < 1e-9:
                            target.append(w + cert.perron_shift)
                            used_p = True
                        elif not used_z and abs(w - z) < 1e-12:
                            target.append(complex(moved, z.imag))
                            used_z = True
                        elif not used_c and abs(w - np.conj(z)) < 1e-12:
                            target.append(complex(moved, -z.imag))
                            used_c = True
                        else:
                            target.append(w)
                    _, err, _ = match_spectra(Spectrum.from_complex(target), spectrum(X))
                    exact += int(err < 1e-6 and cert.min_excess >= -1e-12)
                    errs.append(err)
                    ratios.append(cert.perron_shift / t)
                    if cert.exceeds_budget:
                        over.append({"instance": idx, "t": t, "sign": sign,
                                     "shift_over_t": cert.perron_shift / t})
    return {"seed": seed, "count": count, "runs": runs, "spectrum_exact": exact,
            "spectral_error": _stats(errs), "shift_over_t": _stats(ratios),
            "over_4t": len(over), "over_4t_instances": over[:20]}


def run_suite(seed: int = 7, count: int = 200) -> dict:
    """All ensembles; ``count`` sizes the perturbation ensemble."""
    guo = guo_ensemble(seed, count)
    results = {
        "guo": guo,
        "exact_guo": exact_guo_ensemble(seed),
        "sfc": sfc_ensemble(seed),
        "decomposition": decomposition_ensemble(seed),
        "shift": shift_ensemble(seed),
        "realize": realize_ensemble(seed),
        "dominating_complex": dominating_complex_ensemble(seed),
    }
    checks = {
        "guo_real_certified": guo["real"]["passed"] == guo["real"]["runs"],
        "guo_complex_certified": guo["complex"]["passed"] == guo["complex"]["runs"],
        "skew_complex_shift_2t": guo["complex"]["skew_shift_error"].get("max", 0.0) <= 1e-9,
        "domination": min(guo["real"]["sym_path_min_excess"].get("min", 0.0),
                          guo["complex"]["sym_path_min_excess"].get("min", 0.0)) >= -1e-12,
        "exact_pipeline": results["exact_guo"]["passed"] == results["exact_guo"]["runs"],
        "stochastic_form": results["sfc"]["passed"] == results["sfc"]["count"],
        "decomposition": results["decomposition"]["passed"] == results["decomposition"]["count"],
        "shift_round_trip": (results["shift"]["identity"] == results["shift"]["count"]
                             and results["shift"]["bound_enforced"] == results["shift"]["count"]),
        "realize": results["realize"]["passed"] == results["realize"]["count"],
        "dominating_complex_spectrum": (results["dominating_complex"]["spectrum_exact"]
                                        == results["dominating_complex"]["runs"]),
    }
    return {"seed": seed, "count": count, "checks": checks, "ok": all(checks.values()),
            "results": results}

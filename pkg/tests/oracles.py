"""Independent reference computations used by the tests.

The eigenvalue oracle never touches the QR engine: characteristic polynomial
coefficients come from the Faddeev-LeVerrier recursion in rational
arithmetic, sympy splits the polynomial into square-free factors and each
factor's roots come from numpy's companion-matrix solver.
"""

from fractions import Fraction

import numpy as np
import sympy


def charpoly_exact(M):
    """Coefficients of det(xI - M), leading first, as Fractions."""
    n = len(M)
    A = [[Fraction(v) for v in row] for row in M]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # Mk <- A (M_{k-1} + c_{k-1} I)
        prev = [[Mk[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(A[i][l] * prev[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(Mk[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def eigenvalues_oracle(M):
    """Eigenvalues with multiplicity via exact square-free factorization."""
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in charpoly_exact(M)], x)
    _, factors = sympy.sqf_list(poly)
    roots = []
    for factor, mult in factors:
        fc = [float(v) for v in factor.all_coeffs()]
        r = np.roots(fc) if len(fc) > 1 else np.array([])
        roots.extend(list(r) * mult)
    return np.array(roots, dtype=complex)

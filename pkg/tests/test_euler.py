"""Simplex integration, thresholds, and the chi assembly plumbing."""

import random
from fractions import Fraction
from math import factorial

import pytest

from jetcalc.degpoly import DegreePolynomial
from jetcalc.euler import (
    NonPositiveLeading,
    antiderivative,
    cauchy_bound,
    chi_rousseau_e33,
    positivity_threshold,
    real_root_count,
    real_roots_approx,
    reversal_sign,
    scaled_numerator,
    simplex_integral,
    simplex_top_coefficient,
    top_coefficient,
)
from jetcalc.polyring import Polynomial, tag

M = tag("m", 0, 0)
X = tag("x", 0, 1)
Y = tag("y", 0, 2)
Z = tag("z", 0, 3)


def V(v):
    return Polynomial.variable(v)


def test_unit_simplex_area():
    one = Polynomial.constant(1)
    got = simplex_integral(one, [(X, 1), (Y, 1)], M)
    assert got == Fraction(1, 2) * V(M) * V(M)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_simplex_volume(k):
    variables = [tag(f"v{i}", 0, 10 + i) for i in range(k)]
    got = simplex_integral(Polynomial.constant(1), [(v, 1) for v in variables], M)
    assert got == Fraction(1, factorial(k)) * V(M) ** k


def test_weighted_volume():
    got = simplex_integral(Polynomial.constant(1), [(X, 2), (Y, 5)], M)
    assert got == Fraction(1, 2 * 2 * 5) * V(M) ** 2


@pytest.mark.parametrize("seed", range(5))
def test_fubini_permutation_invariance(seed):
    rng = random.Random(seed)
    integrand = Polynomial.zero()
    for _ in range(4):
        term = Polynomial.constant(rng.randint(-4, 4))
        for v in (X, Y, Z):
            term = term * V(v) ** rng.randint(0, 2)
        integrand = integrand + term
    nest = [(X, 2), (Y, 3), (Z, 5)]
    base = simplex_integral(integrand, nest, M)
    permuted = simplex_integral(integrand, [nest[2], nest[0], nest[1]], M)
    assert base == permuted


@pytest.mark.parametrize("seed", range(5))
def test_closed_form_matches_iterated_integral(seed):
    rng = random.Random(50 + seed)
    integrand = Polynomial.zero()
    deg = 3
    for _ in range(5):
        exps = [rng.randint(0, deg) for _ in range(3)]
        pad = deg * 3 - sum(exps)
        term = Polynomial.constant(rng.randint(-5, 5)) * V(M) ** pad
        for v, e in zip((X, Y, Z), exps):
            term = term * V(v) ** e
        integrand = integrand + term
    nest = [(X, 3), (Y, 4), (Z, 7)]
    full = simplex_integral(integrand, nest, M)
    top = top_coefficient(full, M, deg * 3 + 3)
    assert top == simplex_top_coefficient(integrand, nest, M)


def test_antiderivative_power_rule():
    got = antiderivative(V(X) ** 3 + 2 * V(Y), X)
    assert got == Fraction(1, 4) * V(X) ** 4 + 2 * V(Y) * V(X)


def test_lattice_sum_approaches_integral():
    """Discrete-vs-continuous: exact lattice sums converge at rate O(1/m)."""
    weights = [(X, 2), (Y, 3)]
    integrand = V(X) * V(Y)  # degree 2, two variables: top power m^4
    top = simplex_top_coefficient(integrand, weights, M)
    for m in (120, 240):
        total = Fraction(0)
        for x in range(0, m // 2 + 1):
            rest = m - 2 * x
            for y in range(0, rest // 3 + 1):
                total += x * y
        rel = abs(total - top * m ** 4) / (abs(top) * m ** 4)
        assert rel < Fraction(8, m)


def test_positivity_threshold_cases():
    # (d-2)(d-11) with positive leading coefficient
    p = DegreePolynomial([22, -13, 1])
    assert positivity_threshold(p) == 12
    # strictly positive polynomial: returned D sits below all real roots
    q = DegreePolynomial([1, 0, 1])
    assert positivity_threshold(q) <= 0
    # double root at 4: p >= 0 but p(4) == 0, so the threshold is 5
    r = DegreePolynomial([16, -8, 1])
    assert positivity_threshold(r) == 5
    with pytest.raises(NonPositiveLeading):
        positivity_threshold(DegreePolynomial([1, -1]))
    # factor of d as in the chi numerators
    s = DegreePolynomial([0, 22, -13, 1])
    assert positivity_threshold(s) == 12


def test_positivity_threshold_contract():
    rng = random.Random(3)
    for _ in range(20):
        roots = sorted(rng.randint(-30, 30) for _ in range(3))
        p = DegreePolynomial([1])
        for r in roots:
            p = p * DegreePolynomial([-r, 1])
        D = positivity_threshold(p)
        assert p(D) > 0
        assert all(p(D + k) > 0 for k in range(1, 40))
        assert p(D - 1) <= 0 or real_root_count(p, Fraction(D - 1), Fraction(10 ** 6)) == 0


def test_real_roots_approx():
    p = DegreePolynomial([6, -5, 1])  # roots 2, 3
    roots = real_roots_approx(p)
    assert len(roots) == 2
    assert abs(roots[0] - 2) < 1e-5 and abs(roots[1] - 3) < 1e-5


def test_cauchy_bound_bounds_roots():
    p = DegreePolynomial([-100, 0, 1])
    b = cauchy_bound(p)
    assert b >= 10


def test_scaled_numerator():
    p = DegreePolynomial([Fraction(1, 3), Fraction(-2, 3)])
    assert scaled_numerator(p, 3) == [1, -2]
    with pytest.raises(ValueError):
        scaled_numerator(p, 2)


def test_reversal_sign():
    assert reversal_sign(3) == -1 and reversal_sign(4) == 1


def test_rousseau_cross_check():
    chi = chi_rousseau_e33()
    assert scaled_numerator(chi, 81648000000) == \
        [0, -358873, 185559, -20739, 389]
    assert positivity_threshold(chi) == 43

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hurwitz_kernels.errors import InvalidParams, PoleAt1, PoleAtNonposInt
from hurwitz_kernels.special_functions import (
    EULER_GAMMA,
    ZetaEvalConfig,
    bernoulli_number,
    bernoulli_polynomial,
    bernoulli_polynomial_real,
    digamma,
    hurwitz_zeta,
    hurwitz_zeta_neg_int,
    hurwitz_zeta_sderiv,
    riemann_zeta,
    stieltjes_gamma0,
)

small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=50)


# --- Bernoulli ------------------------------------------------------------

@pytest.mark.parametrize("n, expected", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (3, 0),
                                         (6, Fraction(1, 42)), (12, Fraction(-691, 2730))])
def test_bernoulli_number_values(n, expected):
    assert bernoulli_number(n) == expected


def test_bernoulli_number_matches_mpmath_exactly():
    for n in range(0, 60, 2):
        b = bernoulli_number(n)
        assert mpmath.bernfrac(n) == (b.numerator, b.denominator)


@given(st.integers(min_value=1, max_value=60))
def test_odd_bernoulli_vanish_and_recurrence(n):
    if n >= 1:
        assert bernoulli_number(2 * n + 1) == 0
    assert sum(math.comb(n, k) * bernoulli_number(k) for k in range(n)) == 0 or n == 1


@pytest.mark.parametrize("n, x, expected", [(1, Fraction(0), Fraction(-1, 2)),
                                            (2, Fraction(1, 2), Fraction(-1, 12)),
                                            (4, Fraction(1), Fraction(-1, 30))])
def test_bernoulli_polynomial_values(n, x, expected):
    assert bernoulli_polynomial(n, x) == expected


@given(st.integers(min_value=0, max_value=30), small_rationals)
def test_bernoulli_polynomial_difference(n, x):
    diff = bernoulli_polynomial(n, x + 1) - bernoulli_polynomial(n, x)
    assert diff == (n * x ** (n - 1) if n >= 1 else 0)


@given(st.integers(min_value=0, max_value=30), small_rationals)
def test_bernoulli_polynomial_reflection(n, x):
    assert bernoulli_polynomial(n, 1 - x) == (-1) ** n * bernoulli_polynomial(n, x)


@pytest.mark.parametrize("n, x, expected", [(2, 0.0, 1 / 6), (1, 0.25, -0.25), (3, 1.0, 0.0)])
def test_bernoulli_polynomial_real_values(n, x, expected):
    assert bernoulli_polynomial_real(n, x) == expected


@given(st.integers(min_value=0, max_value=40), st.floats(min_value=-4, max_value=4))
def test_bernoulli_polynomial_real_is_correctly_rounded(n, x):
    assert bernoulli_polynomial_real(n, x) == float(bernoulli_polynomial(n, Fraction(x)))


def test_bernoulli_rejects_negative_index():
    with pytest.raises(InvalidParams):
        bernoulli_polynomial_real(-1, 0.5)


# --- Hurwitz zeta ---------------------------------------------------------

@pytest.mark.parametrize("s, a, expected", [(2, 1.0, math.pi ** 2 / 6), (2, 0.5, math.pi ** 2 / 2), (0, 0.3, 0.2)])
def test_hurwitz_zeta_examples(s, a, expected):
    assert hurwitz_zeta(float(s), a) == pytest.approx(expected, rel=1e-14, abs=1e-15)


@pytest.mark.parametrize("s", [-7.5, -3.0, -0.5, 0.5, 1.5, 2.0, 3.3, 12.0, complex(0.5, 14.1), complex(-0.5, 40.0)])
@pytest.mark.parametrize("a", [0.1, 0.3, 1.0, 1.7, 3.0])
def test_hurwitz_zeta_against_mpmath(s, a):
    ref = complex(mpmath.zeta(s, a))
    got = hurwitz_zeta(s, a)
    # left of the critical strip the head terms grow like (M+a)^-Re(s) and cancel,
    # so the attainable accuracy there is absolute (the same 1e-10 as the cross-route check)
    tol = 1e-12 * max(1.0, abs(ref)) if complex(s).real >= 0 else 1e-10
    assert abs(got - ref) <= tol


@given(st.floats(min_value=-19.5, max_value=25).filter(lambda s: abs(s - 1) > 1e-3),
       st.floats(min_value=0.05, max_value=1.0))
def test_zeta_shift_identity(s, a):
    z = hurwitz_zeta(s, a)
    assert abs(z - hurwitz_zeta(s, a + 1) - a ** -s) <= 1e-12 * (1 + abs(z))


@given(st.floats(min_value=-19.5, max_value=25).filter(lambda s: abs(s - 1) > 1e-3),
       st.floats(min_value=1.0, max_value=5.0))
def test_zeta_shift_identity_large_shift(s, a):
    # for a > 1 and s < 0 the identity subtracts a^-s >> |zeta(s, a)|, so the
    # attainable accuracy is relative to the largest term in it
    z, z1, p = hurwitz_zeta(s, a), hurwitz_zeta(s, a + 1), a ** -s
    assert abs(z - z1 - p) <= 1e-12 * (1 + max(abs(z), abs(z1), p))


@pytest.mark.parametrize("s", [-15.5, -9.5, -5.0, -2.5, -1.0, 0.0, 0.5, 2.0, 3.0, 7.5, 20.0])
def test_zeta_duplication(s):
    z_half = hurwitz_zeta(s, 0.5)
    assert abs(z_half - (2 ** s - 1) * riemann_zeta(s)) <= 1e-11 * max(abs(z_half), 1e-300) + 1e-300


@pytest.mark.parametrize("n", range(13))
@pytest.mark.parametrize("a", [0.1, 0.5, 1.0, 1.9, 3.0])
def test_neg_int_cross_route(n, a):
    assert abs(hurwitz_zeta_neg_int(n, a) - hurwitz_zeta(float(-n), a)) <= 1e-10


@pytest.mark.parametrize("n, expected", [(0, -0.5), (1, -1 / 12), (2, 0.0)])
def test_neg_int_examples(n, expected):
    assert hurwitz_zeta_neg_int(n, 1.0) == pytest.approx(expected, abs=1e-16)


def test_pole_at_one():
    with pytest.raises(PoleAt1):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(PoleAt1):
        hurwitz_zeta(1.0 + 1e-9, 0.5)


def test_config_validation():
    with pytest.raises(InvalidParams):
        ZetaEvalConfig(em_terms=1)
    with pytest.raises(InvalidParams):
        ZetaEvalConfig(shift=4)


# --- s-derivative -----------------------------------------------------------

def test_sderiv_examples():
    assert hurwitz_zeta_sderiv(0.0, 1.0) == pytest.approx(-0.5 * math.log(2 * math.pi), rel=1e-13)
    assert hurwitz_zeta_sderiv(2.0, 1.0) == pytest.approx(-0.9375482543158438, rel=1e-13)


def test_sderiv_shift_consistency():
    a = 1.0
    diff = hurwitz_zeta_sderiv(3.0, a) - hurwitz_zeta_sderiv(3.0, a + 1)
    assert diff == pytest.approx(-math.log(a) * a ** -3.0, abs=1e-14)
    a = 0.4
    diff = hurwitz_zeta_sderiv(3.0, a) - hurwitz_zeta_sderiv(3.0, a + 1)
    assert diff == pytest.approx(-math.log(a) * a ** -3.0, rel=1e-12)


@pytest.mark.parametrize("s", [-3.0, -1.0, 0.0, 2.0, 3.0, 5.0])
@pytest.mark.parametrize("a", [0.3, 1.0, 1.7])
def test_sderiv_vs_richardson_finite_difference(s, a):
    h = 1e-4

    def central(step):
        return (hurwitz_zeta(s + step, a) - hurwitz_zeta(s - step, a)) / (2 * step)

    fd = (4 * central(h / 2) - central(h)) / 3
    d = hurwitz_zeta_sderiv(s, a)
    assert abs(d - fd) <= 1e-6 * abs(d)


@pytest.mark.parametrize("s, a", [(-2.5, 0.7), (0.5, 0.2), (4.0, 2.5), (complex(0.5, 3.0), 1.0)])
def test_sderiv_against_mpmath(s, a):
    ref = complex(mpmath.zeta(s, a, 1))
    assert abs(hurwitz_zeta_sderiv(s, a) - ref) <= 1e-10 * max(1.0, abs(ref))


# --- digamma and gamma0 -----------------------------------------------------

def test_digamma_examples():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-15)
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), rel=1e-14)
    z = digamma(1j)
    assert z.real == pytest.approx(0.09465032062247698, rel=1e-12)
    assert z.imag == pytest.approx(2.0766740474685812, rel=1e-13)


@given(st.floats(min_value=0.1, max_value=100))
def test_digamma_real_against_mpmath(x):
    assert abs(digamma(x) - float(mpmath.digamma(x))) <= 1e-12 * max(1.0, abs(float(mpmath.digamma(x))))


@given(st.floats(min_value=-20, max_value=20), st.floats(min_value=-30, max_value=30))
def test_digamma_complex_against_mpmath(re, im):
    z = complex(re, im)
    if abs(im) < 0.5 and re <= 0.5:
        return  # stay clear of the poles on the non-positive axis
    ref = complex(mpmath.digamma(z))
    assert abs(digamma(z) - ref) <= 1e-11 * max(1.0, abs(ref))


@given(st.floats(min_value=0.01, max_value=0.99))
def test_digamma_reflection(x):
    lhs = digamma(1 - x) - digamma(x)
    rhs = math.pi / math.tan(math.pi * x)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_digamma_pole():
    with pytest.raises(PoleAtNonposInt):
        digamma(-3.0)
    with pytest.raises(PoleAtNonposInt):
        digamma(0.0)


@pytest.mark.parametrize("a, expected", [(1.0, 0.5772156649015329), (0.5, 1.9635100260214235),
                                         (2.0, -0.4227843350984671)])
def test_stieltjes_examples(a, expected):
    assert stieltjes_gamma0(a) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("a", [0.25, 0.5, 1.0, 2.5])
def test_stieltjes_as_laurent_constant(a):
    h = 1e-5
    limit = 0.5 * ((hurwitz_zeta(1 + h, a) - 1 / h) + (hurwitz_zeta(1 - h, a) + 1 / h))
    assert abs(limit - stieltjes_gamma0(a)) <= 1e-4


@pytest.mark.parametrize("s, expected", [(2.0, 1.6449340668482264), (3.0, 1.2020569031595943), (0.0, -0.5)])
def test_riemann_zeta_examples(s, expected):
    assert riemann_zeta(s) == pytest.approx(expected, rel=1e-15)

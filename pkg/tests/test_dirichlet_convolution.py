import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from hurwitz_kernels.dirichlet_convolution import (
    ConvolutionInstance,
    convolve,
    convolve_multi,
    dirichlet_series,
    finite_sequence,
    hurwitz_pair,
    power_law,
    verify_multi,
    verify_two_term,
    zeta_generating_fn,
)
from hurwitz_kernels.errors import DivergentAtOrder, InvalidParams, OnPole
from hurwitz_kernels.special_functions import hurwitz_zeta, riemann_zeta

mpmath.mp.dps = 30


def integers(power=1):
    return power_law(1, 1.0, power, 0.0, 0.0, base=1)


def test_riemann_zeta_two_instance():
    assert dirichlet_series(integers(), 2) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)


def test_divergent_order():
    with pytest.raises(DivergentAtOrder):
        dirichlet_series(integers(), 1)


@pytest.mark.parametrize("k, a, alpha, q", [(1, 1.0, math.pi, 2), (2, 0.5, 2 * math.pi, 1), (1, 0.3, math.pi / 2, 3)])
def test_hurwitz_instance_x(k, a, alpha, q):
    _, x = hurwitz_pair("unit", k, a, 1.0, alpha)
    expected = (-1) ** q * alpha ** (k * q) * hurwitz_zeta(2.0 * k * q, a)
    assert dirichlet_series(x, q) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("k, b, alpha, q", [(1, 1.0, math.pi, 1), (2, 0.25, 2 * math.pi, 2), (3, 0.75, math.pi, 1)])
def test_hurwitz_instance_y_odd(k, b, alpha, q):
    y, _ = hurwitz_pair("odd", k, 1.0, b, alpha)
    beta = math.pi ** 2 / alpha
    expected = beta ** (k * q) * hurwitz_zeta(2.0 * k * q + 1, b)
    assert dirichlet_series(y, q) == pytest.approx(expected, rel=1e-13)


def test_generating_fn_at_zero():
    assert zeta_generating_fn(integers(2), 0.0) == 0


def test_generating_fn_cotangent_sum():
    # sum_{n>=1} -1/(n^2+1) = (1 - pi coth pi)/2
    v = zeta_generating_fn(integers(2), -1.0)
    assert v == pytest.approx(-1.0766740474685812, abs=1e-13)


@pytest.mark.parametrize("k, a, alpha, z", [(1, 0.5, math.pi, 3.7), (2, 0.25, 2 * math.pi, 0.9), (1, 1.0, math.pi, -2.5 + 1j)])
def test_generating_fn_hurwitz_instance(k, a, alpha, z):
    _, x = hurwitz_pair("unit", k, a, 1.0, alpha)
    expected = complex(mpmath.nsum(lambda n: z / (-(n + a) ** (2 * k) / mpmath.mpf(alpha) ** k - z), [0, mpmath.inf]))
    v = complex(zeta_generating_fn(x, z))
    assert abs(v - expected) <= 1e-12 * (1 + abs(expected))


def test_generating_fn_on_pole():
    with pytest.raises(OnPole):
        zeta_generating_fn(integers(2), 4.0)


def test_convolve_single_term():
    y, x = integers(2), integers(2)
    assert convolve(ConvolutionInstance(y, x, 1)) == pytest.approx(dirichlet_series(y, 1) * dirichlet_series(x, 1), rel=1e-15)


def test_convolve_squares_order_three():
    z = lambda q: riemann_zeta(2.0 * q)
    expected = 2 * z(1) * z(3) + z(2) ** 2
    assert convolve(ConvolutionInstance(integers(2), integers(2), 3)) == pytest.approx(expected, rel=1e-14)


def test_convolve_thm_2_1_rhs_term():
    y, x = hurwitz_pair("unit", 1, 1.0, 1.0, math.pi)
    # k=1, N=1: zeta_y(1) zeta_x(1) = -(pi zeta(2)) (pi zeta(2))
    expected = -(math.pi * riemann_zeta(2.0)) ** 2
    assert convolve(ConvolutionInstance(y, x, 1)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("kind", ["unit", "odd", "mixed"])
def test_two_term_identity(kind):
    y, x = hurwitz_pair(kind, 1, 1.0, 1.0, math.pi)
    rep = verify_two_term(ConvolutionInstance(y, x, 2))
    assert rep.abs_residual <= 1e-8


@pytest.mark.parametrize("kind, k, N, a, b, ratio", [
    ("unit", 2, 1, 0.5, 0.75, 2.0), ("odd", 1, 3, 1 / 3, 0.5, 0.5), ("mixed", 2, 2, 0.25, 1.0, 1.0),
])
def test_two_term_identity_hurwitz(kind, k, N, a, b, ratio):
    y, x = hurwitz_pair(kind, k, a, b, ratio * math.pi)
    rep = verify_two_term(ConvolutionInstance(y, x, N))
    assert rep.rel_residual <= 1e-8


@pytest.mark.parametrize("kind", ["unit", "odd", "mixed"])
@pytest.mark.parametrize("N", [1, 2, 3])
def test_convolution_commutes(kind, N):
    y, x = hurwitz_pair(kind, 1, 0.75, 0.5, 2 * math.pi)
    l1 = verify_two_term(ConvolutionInstance(y, x, N)).lhs
    l2 = verify_two_term(ConvolutionInstance(x, y, N)).lhs
    assert abs(l1 - l2) <= 1e-12 * max(1.0, abs(l1))


@given(st.floats(1.1, 5), st.floats(0.0, 3), st.floats(1.0, 4), st.integers(1, 6))
def test_monotone_damping(scale, decay, growth, N):
    seq = power_law(1, scale, growth, decay, 1.0, base=0)
    if growth * N + decay <= 1.05:
        return
    assert abs(dirichlet_series(seq, N + 2)) <= abs(dirichlet_series(seq, N))


def test_finite_sequences_three_fold():
    seqs = [finite_sequence([2.0, -3.0, 5.5], [1.0, 0.5, 2.0]),
            finite_sequence([1.5, 4.0], [1.0, -1.0]),
            finite_sequence([-2.5, 3.0 + 1j], [0.3, 1.0])]
    for N in (2, 3, 4):
        rep = verify_multi(seqs, N)
        assert rep.abs_residual <= 1e-12


def test_multi_matches_two_term_convolve():
    s1 = finite_sequence([2.0, 3.0], [1.0, 1.0])
    s2 = finite_sequence([5.0, -7.0], [2.0, 1.0])
    assert convolve_multi([s1, s2], 3) == pytest.approx(convolve(ConvolutionInstance(s1, s2, 3)), rel=1e-15)


def test_invalid_inputs():
    with pytest.raises(InvalidParams):
        hurwitz_pair("other", 1, 1.0, 1.0, math.pi)
    with pytest.raises(InvalidParams, match="order must be ≥ 1"):
        ConvolutionInstance(integers(2), integers(2), 0)
    with pytest.raises(InvalidParams):
        finite_sequence([0.0], [1.0])

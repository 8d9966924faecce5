import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hurwitz_kernels.errors import InvalidParams
from hurwitz_kernels.kernels import (
    KernelParams,
    cos_constant,
    kernel_power_sum,
    phi_closed_k1,
    phi_kernel,
    phi_kernel_digamma,
    phi_kernel_eval,
    psi_kernel,
    psi_kernel_digamma,
    psi_kernel_eval,
    psi_kernel_symmetric,
    ramanujan_kernel_closed,
)
from hurwitz_kernels.special_functions import hurwitz_zeta

X_GRID = (0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0)
BRUTE_TERMS = 10_000_000


def brute_psi(x, a, k, terms=BRUTE_TERMS):
    t = np.arange(terms, dtype=np.float64) + a
    s = np.sum(x ** (2 * k - 1) / (x ** (2 * k) + t ** (2 * k)))
    tail = x ** (2 * k - 1) * hurwitz_zeta(2.0 * k, terms + a)
    return (2 * a - 1) / (2 * math.pi * x) - cos_constant(k) + s / math.pi, tail / math.pi


def brute_phi(x, a, k, terms=BRUTE_TERMS):
    t = np.arange(terms, dtype=np.float64) + a
    s = np.sum(1.0 / (t * (t ** (2 * k) + x ** (2 * k))))
    tail = x ** (2 * k) * hurwitz_zeta(2.0 * k + 1, terms + a)
    return (math.log(x) - float(mpmath.digamma(a))) / math.pi - x ** (2 * k) * s / math.pi, tail / math.pi


# --- examples -------------------------------------------------------------

def test_psi_ramanujan_kernel_at_one():
    # 1/(e^{2 pi} - 1), mpmath at 30 digits
    assert psi_kernel(KernelParams(1.0, 1.0, 1)) == pytest.approx(0.0018709365986606441, rel=1e-12)


def test_psi_laurent_leading_term():
    a, k = 0.75, 2
    probes = [x * psi_kernel(KernelParams(x, a, k)) for x in (1e-3, 1e-5, 1e-7)]
    target = (2 * a - 1) / (2 * math.pi)
    errs = [abs(p - target) for p in probes]
    assert errs[-1] < 1e-6
    assert errs[0] > errs[1] > errs[2]


def test_psi_brute_force_half_half_k2():
    v = psi_kernel(KernelParams(0.5, 0.5, 2))
    ref, tail = brute_psi(0.5, 0.5, 2)
    assert abs(v - ref) <= 1e-9 + tail
    assert v == pytest.approx(-0.025996783350955709, abs=1e-14)  # mpmath nsum


def test_phi_digamma_value_at_one():
    # (log 1 - Re psi(i))/pi with psi(i) from mpmath
    expected = -0.030128132784599942
    assert phi_kernel(KernelParams(1.0, 1.0, 1)) == pytest.approx(expected, abs=1e-14)
    assert phi_closed_k1(1.0) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("x", [1.0, 2.0])
def test_phi_brute_force_k1(x):
    ref, tail = brute_phi(x, 1.0, 1)
    assert abs(phi_kernel(KernelParams(x, 1.0, 1)) - ref) <= 1e-10 + tail


@pytest.mark.parametrize("x, expected", [(2.0, -0.006825943773941695), (10.0, -0.00026552477337049796)])
def test_phi_k1_mpmath(x, expected):
    assert phi_kernel(KernelParams(x, 1.0, 1)) == pytest.approx(expected, abs=1e-14)


def test_phi_closed_matches_series_at_ten():
    assert abs(phi_closed_k1(10.0) - phi_kernel(KernelParams(10.0, 1.0, 1))) <= 1e-9


def test_ramanujan_closed_examples():
    assert ramanujan_kernel_closed(1.0) == pytest.approx(0.0018709365986606441, rel=1e-14)
    assert ramanujan_kernel_closed(0.1) == pytest.approx(1.1435680009516884, rel=1e-14)
    for x in (1.0, 2.0, 5.0):
        assert ramanujan_kernel_closed(x) < 2 * math.exp(-2 * math.pi * x)


@pytest.mark.parametrize("x, a, k, expected", [
    (2.0, 0.5, 2, 3.3736731669273724e-05),
    (0.7, 1 / 3, 3, 0.050074613453716143),
])
def test_psi_mpmath_values(x, a, k, expected):
    assert psi_kernel(KernelParams(x, a, k)) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("x, a, k, expected", [
    (1.0, 1.0, 2, 0.013426558501634683),
    (1.3, 0.75, 2, -0.0027694022177426954),
])
def test_phi_mpmath_values(x, a, k, expected):
    assert phi_kernel(KernelParams(x, a, k)) == pytest.approx(expected, abs=1e-14)


# --- invariants -----------------------------------------------------------

@pytest.mark.parametrize("x", X_GRID)
def test_psi_matches_closed_form(x):
    v = ramanujan_kernel_closed(x)
    assert abs(psi_kernel(KernelParams(x, 1.0, 1)) - v) <= 1e-10 * (1 + abs(v))


@pytest.mark.parametrize("x", X_GRID)
def test_phi_matches_closed_form(x):
    assert abs(phi_kernel(KernelParams(x, 1.0, 1)) - phi_closed_k1(x)) <= 1e-9


@given(st.floats(0.05, 20), st.floats(0.05, 4), st.integers(1, 4), st.floats(0.3, 10))
def test_scaling_contract(x, a, k, ratio):
    alpha = ratio * math.pi
    p = KernelParams(x, a, k, alpha)
    q = KernelParams(alpha * x / math.pi, a, k)
    assert psi_kernel(p) == psi_kernel(q)
    assert phi_kernel(p) == phi_kernel(q)


@pytest.mark.parametrize("x, a, k", [(0.3, 0.2, 1), (1.7, 0.9, 2), (3.5, 2.5, 3), (0.9, 1 / 3, 4)])
def test_tail_certificate_psi(x, a, k):
    ev = psi_kernel_eval(KernelParams(x, a, k), 1e-13)
    ref, tail = brute_psi(x, a, k)
    assert abs(ev.value - ref) <= ev.bound + tail + 1e-13  # last term: brute-force summation rounding


@pytest.mark.parametrize("x, a, k", [(0.3, 0.2, 1), (1.7, 0.9, 2), (3.5, 2.5, 3)])
def test_tail_certificate_phi(x, a, k):
    ev = phi_kernel_eval(KernelParams(x, a, k), 1e-13)
    ref, tail = brute_phi(x, a, k)
    assert abs(ev.value - ref) <= ev.bound + tail + 1e-13


@given(st.floats(0.01, 50), st.floats(0.01, 5), st.integers(1, 5), st.integers(0, 200))
def test_series_terms_positive(x, a, k, n):
    t = n + a
    assert x ** (2 * k - 1) / (x ** (2 * k) + t ** (2 * k)) > 0


@given(st.floats(0.1, 8), st.floats(0.1, 3), st.integers(1, 3))
def test_series_agrees_with_digamma_form(x, a, k):
    assert psi_kernel(KernelParams(x, a, k)) == pytest.approx(psi_kernel_digamma(x, a, k), abs=1e-11)
    assert phi_kernel(KernelParams(x, a, k)) == pytest.approx(phi_kernel_digamma(x, a, k), abs=1e-11)


@given(st.floats(0.05, 6), st.sampled_from([0.5, 1.0]), st.integers(1, 4))
def test_symmetric_form_agrees_with_series(x, a, k):
    assert psi_kernel_symmetric(x, a, k) == pytest.approx(psi_kernel(KernelParams(x, a, k)), abs=1e-12)


def test_cos_constant():
    assert cos_constant(1) == 0.5
    for k in range(1, 7):
        assert cos_constant(k) == pytest.approx(1 / (2 * k * math.cos(math.pi * (k - 1) / (2 * k))), rel=1e-14)


@pytest.mark.parametrize("kw", [
    dict(x=0.0, a=1.0, k=1), dict(x=-1.0, a=1.0, k=1), dict(x=1.0, a=0.0, k=1),
    dict(x=1.0, a=1.0, k=0), dict(x=1.0, a=1.0, k=1, alpha=-2.0), dict(x=math.nan, a=1.0, k=1),
])
def test_invalid_params(kw):
    with pytest.raises(InvalidParams):
        KernelParams(**kw)


def test_k_message():
    with pytest.raises(InvalidParams, match="k must be ≥ 1"):
        KernelParams(1.0, 1.0, 0)


# --- weighted sums --------------------------------------------------------

def test_power_sum_ramanujan_anchor():
    # sum n^-3/(e^{2 pi n}-1) = 7 pi^3/360 - zeta(3)/2
    r = kernel_power_sum("psi", 1.0, 1, 1.0, 1.0, -3)
    assert abs(r.value - 0.001871372759366027) <= 1e-15 + r.bound


def test_power_sum_glaisher():
    r = kernel_power_sum("psi", 1.0, 1, 1.0, 1.0, 5)
    assert abs(r.value - 1 / 504) <= 1e-13


@pytest.mark.parametrize("kind, a, k, r, shift, power", [
    ("psi", 0.3, 2, 0.8, 0.6, -5), ("phi", 0.7, 1, 1.3, 0.25, -3), ("phi", 1.0, 2, 0.5, 1.0, -4),
])
def test_power_sum_direct(kind, a, k, r, shift, power):
    f = psi_kernel if kind == "psi" else phi_kernel
    direct = math.fsum((n + shift) ** power * f(KernelParams(r * (n + shift), a, k)) for n in range(4000))
    # remainder of the direct sum from the leading large-X behaviour
    res = kernel_power_sum(kind, a, k, r, shift, power)
    assert abs(res.value - direct) <= 1e-6

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hurwitz_kernels.contour_quadrature import (
    LineIntegralSpec,
    auto_spec,
    cross_check,
    decay_bound,
    kernel_via_quadrature,
    resolve_phi_normalization,
    tail_bound,
    zeta_line_bound,
    _zeta_line,
)
from hurwitz_kernels.errors import InvalidParams, QuadratureNotConverged
from hurwitz_kernels.kernels import KernelParams, phi_kernel, psi_kernel, ramanujan_kernel_closed
from hurwitz_kernels.special_functions import hurwitz_zeta

CROSS_TRIPLES = [(1.0, 1.0, 1), (0.5, 0.3, 1), (2.5, 0.75, 1), (2.0, 0.5, 2), (1.0, 1.0, 2), (0.7, 1 / 3, 2)]


def test_ramanujan_kernel_by_quadrature():
    q = kernel_via_quadrature(KernelParams(1.0, 1.0, 1), LineIntegralSpec(c=1.5, T=60, step=0.05))
    assert abs(q.value - 0.0018709365986606441) <= 1e-7
    assert abs(q.value.imag) <= 10 * q.error


def test_psi_k2_by_quadrature():
    p = KernelParams(2.0, 0.5, 2)
    q = kernel_via_quadrature(p, auto_spec("cosine", p))
    assert abs(q.value - psi_kernel(p)) <= 1e-6


def test_phi_normalization_single_match():
    p = KernelParams(1.0, 1.0, 2)
    series = phi_kernel(p)
    matches = [v for v in ("factor_1", "factor_1_over_k")
               if abs(kernel_via_quadrature(p, auto_spec("sine", p, 1e-9, v)).value - series) <= 1e-6]
    assert matches == ["factor_1_over_k"]


def test_resolve_phi_normalization():
    res = resolve_phi_normalization()
    assert res.winner == "factor_1_over_k"
    assert res.separation >= 1e3
    assert set(res.errata_entry()["readings"]) == {"factor_1", "factor_1_over_k"}


@pytest.mark.parametrize("x, a, k", CROSS_TRIPLES)
@pytest.mark.parametrize("kind", ["psi", "phi"])
def test_cross_check_and_realness(kind, x, a, k):
    cc = cross_check(kind, KernelParams(x, a, k))
    assert cc.difference <= 1e-6
    assert abs(complex(cc.quadrature).imag) <= 10 * cc.quadrature_error


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_k1_closed_form(x):
    p = KernelParams(x, 1.0, 1)
    q = kernel_via_quadrature(p, auto_spec("cosine", p))
    assert abs(q.value - ramanujan_kernel_closed(x)) <= 1e-6


@pytest.mark.parametrize("family, x, a, k", [("cosine", 1.3, 0.4, 1), ("sine", 0.8, 0.75, 2), ("cosine", 2.0, 1.0, 2)])
def test_step_halving_consistency(family, x, a, k):
    p = KernelParams(x, a, k)
    base = auto_spec(family, p, 1e-9)
    coarse = kernel_via_quadrature(p, base)
    fine = kernel_via_quadrature(p, LineIntegralSpec(base.c, base.T, base.step / 2, family, base.norm_variant, base.budget))
    assert abs(coarse.value - fine.value) <= coarse.error


@pytest.mark.parametrize("family, x, a, k", [("cosine", 1.0, 0.5, 1), ("sine", 1.5, 0.3, 2), ("cosine", 0.6, 0.8, 3)])
def test_height_increase_within_tail(family, x, a, k):
    p = KernelParams(x, a, k)
    spec = LineIntegralSpec(c=1.5 if family == "cosine" or k > 1 else 1.25, T=20, step=0.1,
                            kernel_family=family, budget=1e-10, max_halvings=6)
    higher = LineIntegralSpec(spec.c, spec.T + 10, spec.step, family, spec.norm_variant, spec.budget, spec.max_halvings)
    lo, hi = kernel_via_quadrature(p, spec), kernel_via_quadrature(p, higher)
    assert abs(lo.value - hi.value) <= tail_bound(p, spec) + 2e-10  # two halving budgets


def test_decay_bound_examples():
    assert decay_bound("cosine", 1, 10) == pytest.approx(4 * math.exp(-5 * math.pi), rel=1e-15)
    assert decay_bound("cosine", 1, 10) == pytest.approx(6.03e-7, rel=1e-3)
    assert decay_bound("sine", 2, 20) == pytest.approx(4 * math.exp(-5 * math.pi), rel=1e-15)
    vals = [decay_bound("sine", 2, t) for t in (1, 5, 10, 50, 100)]
    assert all(u > v for u, v in zip(vals, vals[1:]))


@given(st.sampled_from(["cosine", "sine"]), st.integers(1, 4), st.floats(1, 80), st.floats(1.01, 1.9))
def test_decay_bound_bounds_trig(family, k, t, c):
    s = complex(c, t)
    if family == "cosine":
        trig = abs(np.cos(math.pi * (s + k - 1) / (2 * k)))
    else:
        trig = abs(np.sin(math.pi * s / (2 * k)))
    assert 1 / trig <= decay_bound(family, k, t)


@given(st.floats(-0.9, -0.1), st.floats(-40, 40), st.floats(0.1, 2))
def test_zeta_line_bound_dominates(sigma, t, a):
    z = complex(hurwitz_zeta(complex(sigma, t), a))
    assert abs(z) <= zeta_line_bound(sigma, t, a)


def test_vectorised_zeta_line():
    w = np.array([complex(-0.5, t) for t in (-30.0, -1.0, 0.0, 2.5, 17.0)])
    ref = [complex(hurwitz_zeta(complex(v), 0.3)) for v in w]
    assert np.max(np.abs(_zeta_line(w, 0.3) - ref)) <= 1e-10 * max(abs(r) for r in ref)


def test_not_converged():
    p = KernelParams(1.0, 1.0, 1)
    with pytest.raises(QuadratureNotConverged):
        kernel_via_quadrature(p, LineIntegralSpec(step=0.25, budget=1e-30, max_halvings=0))


@pytest.mark.parametrize("kw", [dict(c=1.0), dict(T=5), dict(step=0.3), dict(kernel_family="tan"), dict(norm_variant="x")])
def test_invalid_spec(kw):
    with pytest.raises(InvalidParams):
        LineIntegralSpec(**kw)


def test_invalid_decay_args():
    with pytest.raises(InvalidParams):
        decay_bound("cosine", 1, 0.5)
    with pytest.raises(InvalidParams):
        decay_bound("cosine", 0, 5)

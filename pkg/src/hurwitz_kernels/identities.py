"""Registry of kernel identities with independent left and right evaluators.

Every identity is a pair of functions on a parameter dict: the left side is
built from weighted kernel sums (or exponential / digamma sums) and the right
side only from zeta, Bernoulli and digamma values, so a small residual is real
evidence.  Identities whose stated form is ambiguous or inconsistent carry
several *readings*; ``resolve_variant`` evaluates all of them on a grid and
keeps the one that fits.

Parameter conventions: alpha * beta = pi^2, Psi_alpha(x, a; k) = Psi(alpha x / pi,
a; k) and likewise for Phi.  Both kernel sums run over n >= 0 at x = n + shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

from .dirichlet_convolution import ConvolutionInstance, hurwitz_pair, two_term_parts
from .errors import (
    InvalidParams,
    OnPole,
    PoleAt1,
    PoleAtNonposInt,
    PrecisionLimit,
    VariantUnresolved,
)
from .kernels import cos_constant, kernel_power_sum
from .report import IdentityCase, IdentityReport, make_report
from .special_functions import (
    EULER_GAMMA,
    bernoulli_number,
    bernoulli_polynomial_real,
    digamma,
    fsum_complex,
    hurwitz_zeta_scaled,
    hurwitz_zeta_sderiv,
    riemann_zeta,
    stieltjes_gamma0,
    zeta_real,
)

__all__ = [
    "IdentityCase",
    "IdentityReport",
    "Reading",
    "IdentityEntry",
    "REGISTRY",
    "VariantResolution",
    "RouteComparison",
    "evaluate",
    "evaluate_reading",
    "resolve_variant",
    "default_tol",
    "eval_thm_2_1",
    "eval_cor_2_2",
    "eval_riemann_cor",
    "eval_k1_digamma",
    "eval_thm1",
    "eval_prop",
    "eval_thm2",
    "eval_odd_zeta",
    "eval_kernel_relation",
    "eval_classical_ramanujan",
    "thm_2_1_routes",
    "odd_zeta_routes",
    "kernel_relation_routes",
    "exp_weighted_sum",
    "digamma_line_sum",
]

PI = math.pi
EPS = 2.0 ** -52
SEPARATION = 1e3

Value = tuple[float, float]  # (value, truncation/rounding bound)


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------

def _ab(p: dict) -> tuple[float, float]:
    alpha = float(p["alpha"])
    return alpha, float(p.get("beta", PI * PI / alpha))


def _ratio(x: float) -> float:
    # alpha/pi, exactly 1 at alpha = pi
    return 1.0 if x == PI else x / PI


def _ksum(kind: str, a: float, k: int, scale: float, shift: float, power: int, corrections: int = 0) -> Value:
    r = kernel_power_sum(kind, a, k, _ratio(scale), shift, power, corrections)
    return r.value, r.bound


def _z(s: float, a: float) -> float:
    return zeta_real(float(s), float(a))


def _dz(s: float, a: float) -> float:
    return hurwitz_zeta_sderiv(float(s), float(a))


def _cancelling(values: list[float]) -> set[int]:
    """Indices of terms that cancel bit for bit against another term.

    Such pairs come out of mirror-symmetric parameter choices where both terms
    are produced by the same operation sequence, so their rounding errors are
    identical and drop out together with the values.
    """
    seen: dict[float, list[int]] = {}
    out: set[int] = set()
    for i, v in enumerate(values):
        partners = seen.get(-v)
        if v != 0.0 and partners:
            out.update((i, partners.pop()))
        else:
            seen.setdefault(v, []).append(i)
    return out


def _combine(parts: Iterable[tuple[float, Value]]) -> Value:
    """sum of coef * value with bounds scaled accordingly."""
    parts = list(parts)
    terms = [coef * v for coef, (v, _) in parts]
    skip = _cancelling(terms)
    bound = sum(abs(coef) * b for i, (coef, (_, b)) in enumerate(parts) if i not in skip)
    return math.fsum(terms), bound + 4 * EPS * sum(abs(t) for i, t in enumerate(terms) if i not in skip)


def _exact(terms: list[float]) -> Value:
    skip = _cancelling(terms)
    return math.fsum(terms), 8 * EPS * sum(abs(t) for i, t in enumerate(terms) if i not in skip)


def exp_weighted_sum(power: int, c: float) -> Value:
    """sum_{n>=1} n^power / (e^(c n) - 1) by direct summation, with a tail bound."""
    if not c > 0:
        raise InvalidParams("the exponential rate must be positive")
    terms: list[float] = []
    peak = max(1.0, power / c)
    n = 1
    while True:
        t = math.exp(power * math.log(n) - c * n) / -math.expm1(-c * n)
        terms.append(t)
        if n > peak + 1 and t <= 1e-19 * max(terms):
            break
        n += 1
    ratio = math.exp(-c) * ((n + 1) / n) ** max(power, 0)
    tail = t * ratio / (1 - ratio)
    return math.fsum(terms), tail + 4 * EPS * sum(terms)


def digamma_line_sum(part: str, c0: float, w: float, shift: float, power: int) -> tuple[complex, float]:
    """sum_{n>=0} (n+shift)^-power F(w (n+shift)), F(X) = Re or Im psi(c0 + iX).

    part "re" uses (psi(c0+iX) + psi(c0-iX))/2 and part "im" uses
    (psi(c0+iX) - psi(c0-iX))/(2i); both digamma values are computed, so the
    result is complex and its imaginary part measures how well the conjugate
    pair cancels.  Once X >= 7 the large-X expansion

        Re psi(c0+iX) ~ log X + sum_p (-1)^(p+1) B_2p(c0)/(2p) X^-2p
        Im psi(c0+iX) ~ pi/2 - (c0-1/2)/X + sum_p (-1)^(p+1) B_(2p+1)(c0)/(2p+1) X^-(2p+1)

    is summed over n in closed form; what it leaves out is O(exp(-2 pi X)).
    """
    if part not in ("re", "im"):
        raise InvalidParams("part must be 're' or 'im'")
    if power <= 1:
        raise InvalidParams("the digamma sum needs power > 1")
    n1 = 0
    while w * (n1 + shift) < 7.0:
        n1 += 1
    head: list[complex] = []
    for n in range(n1):
        t = n + shift
        x = w * t
        up, down = digamma(complex(c0, x)), digamma(complex(c0, -x))
        f = (up + down) / 2 if part == "re" else (up - down) / 2j
        head.append(f * t ** -power)
    ell = n1 + shift
    P = float(power)
    tail: list[float] = []
    if part == "re":
        tail += [math.log(w) * _z(P, ell), -_dz(P, ell)]
        order = lambda j: 2 * j
        coef = lambda j: (-1) ** (j + 1) * bernoulli_polynomial_real(2 * j, c0) / (2 * j)
    else:
        tail += [PI / 2 * _z(P, ell), -(c0 - 0.5) / w * _z(P + 1, ell)]
        order = lambda j: 2 * j + 1
        coef = lambda j: (-1) ** (j + 1) * bernoulli_polynomial_real(2 * j + 1, c0) / (2 * j + 1)
    prev = math.inf
    last = 0.0
    lead = abs(math.fsum(tail)) or 1.0
    for j in range(1, 200):
        q = order(j)
        # w^-q zeta(P+q, l) = (w l)^-q l^-P (l^(P+q) zeta(P+q, l))
        t = coef(j) * math.exp(-q * math.log(w * ell) - P * math.log(ell)) * hurwitz_zeta_scaled(P + q, ell)
        if abs(t) > prev:
            break
        tail.append(t)
        prev = last = abs(t)
        if abs(t) <= 1e-19 * lead:
            break
    value = fsum_complex(head) + math.fsum(tail)
    bound = last + math.exp(-2 * PI * w * ell) * ell ** -P * 4 + 8 * EPS * (
        sum(abs(h) for h in head) + sum(abs(t) for t in tail))
    return value, bound


def _bern_frac(n: int) -> Fraction:
    return bernoulli_number(n)


# ---------------------------------------------------------------------------
# registry types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Reading:
    tag: str
    note: str


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    summary: str
    params: tuple[str, ...]
    lhs: Callable[[dict, str], Value]
    rhs: Callable[[dict, str], Value]
    readings: tuple[Reading, ...]
    default: str
    grid: tuple[dict, ...]
    quick: tuple[dict, ...]
    variant_grid: tuple[dict, ...] = ()
    ambiguity: str = ""
    lhs_key: Callable[[str], str] = field(default=lambda tag: "")
    check: Callable[[dict], None] = field(default=lambda p: None)

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(r.tag for r in self.readings)

    def reading(self, tag: str) -> Reading:
        for r in self.readings:
            if r.tag == tag:
                return r
        raise InvalidParams(f"{self.id} has no reading {tag!r}; known: {', '.join(self.tags)}")


REGISTRY: dict[str, IdentityEntry] = {}


def _register(entry: IdentityEntry) -> IdentityEntry:
    REGISTRY[entry.id] = entry
    return entry


def _need(p: dict, names: Iterable[str], ident: str) -> None:
    missing = [n for n in names if n not in p]
    if missing:
        raise InvalidParams(f"{ident} needs parameters {', '.join(missing)}")


def _cap(params: dict, **limits: int) -> None:
    for name, top in limits.items():
        if name in params and params[name] > top:
            raise PrecisionLimit(f"{name}={params[name]} exceeds the supported range {name} <= {top}")


def _grid(**axes: Iterable[Any]) -> tuple[dict, ...]:
    keys = list(axes)
    out: list[dict] = [{}]
    for key in keys:
        out = [dict(d, **{key: v}) for d in out for v in axes[key]]
    return tuple(out)


def _with_alpha(cases: tuple[dict, ...], ratios: Iterable[float]) -> tuple[dict, ...]:
    out = []
    for c in cases:
        for r in ratios:
            out.append(dict(c, alpha=PI if r == 1 else r * PI))
    return tuple(out)


GRID_AB = (0.25, 1 / 3, 0.5, 2 / 3, 0.75, 1.0, 0.41421356237309515)
ALPHA_RATIOS = (0.5, 1.0, 2.0)


# ---------------------------------------------------------------------------
# thm_2_1 family: Psi sums against a zeta convolution
# ---------------------------------------------------------------------------

def _thm21_lhs(p: dict, tag: str) -> Value:
    k, N, a, b = p["k"], p["N"], p["a"], p["b"]
    alpha, beta = _ab(p)
    M, Mp = 2 * k * (N + 1) - 1, k * (N + 1) - 1
    s1 = _ksum("psi", a, k, alpha, b, -M)
    s2 = _ksum("psi", b, k, beta, a, -M)
    return _combine([(beta ** Mp, s1), (-((-1) ** N) * alpha ** Mp, s2)])


def _thm21_rhs(p: dict, tag: str) -> Value:
    k, N, a, b = p["k"], p["N"], p["a"], p["b"]
    alpha, beta = _ab(p)
    M, Mp = 2 * k * (N + 1) - 1, k * (N + 1) - 1
    C = cos_constant(k)
    shift = 1 if tag == "p_plus_1" else 0
    # products grouped so that mirror terms (a <-> b, alpha <-> beta) round identically
    terms = [(-1) ** N * (alpha ** Mp * (_z(M, a) * C)), -(beta ** Mp * (_z(M, b) * C))]
    for q in range(N + 2):
        terms.append((-1) ** (q + shift) * ((_z(2 * k * q, a) * _z(2 * k * (N + 1 - q), b))
                     * (alpha ** (k * q - 1) * beta ** (k * (N + 1 - q) - 1))))
    return _exact(terms)


def _thm21_check(p: dict) -> None:
    _need(p, ("k", "N", "a", "b", "alpha"), "thm_2_1")
    _cap(p, k=3, N=3)


_SIGN_READINGS = (
    Reading("p_plus_1", "convolution term carries (-1)^(p+1)"),
    Reading("p", "convolution term carries (-1)^p"),
)

_register(IdentityEntry(
    id="thm_2_1",
    summary="Psi-weighted sums of Hurwitz zeta type against an even zeta convolution",
    params=("k", "N", "a", "b", "alpha"),
    lhs=_thm21_lhs, rhs=_thm21_rhs,
    readings=_SIGN_READINGS, default="p_plus_1",
    grid=_with_alpha(_grid(k=(1, 2, 3), N=(1, 2, 3), a=(1 / 3, 0.5, 0.75, 1.0), b=(1 / 3, 0.5, 0.75, 1.0)), ALPHA_RATIOS),
    quick=({"k": 1, "N": 1, "a": 1.0, "b": 1.0, "alpha": PI}, {"k": 2, "N": 1, "a": 0.5, "b": 0.5, "alpha": PI},
           {"k": 1, "N": 2, "a": 1 / 3, "b": 2 / 3, "alpha": 2 * PI}),
    variant_grid=_with_alpha(_grid(k=(1, 2), N=(1, 2), a=(1 / 3,), b=(0.75,)), (0.5, 2.0)),
    ambiguity="sign of the convolution term",
    check=_thm21_check,
))


def _cor_params(p: dict) -> dict:
    q = dict(p)
    q["b"] = q["a"]
    return q


def _cor22_check(p: dict) -> None:
    _need(p, ("k", "N", "a", "alpha"), "cor_2_2")
    if "b" in p and p["b"] != p["a"]:
        raise InvalidParams("cor_2_2 requires a = b")
    _cap(p, k=3, N=3)


_register(IdentityEntry(
    id="cor_2_2",
    summary="equal-shift case a = b of thm_2_1",
    params=("k", "N", "a", "alpha"),
    lhs=lambda p, t: _thm21_lhs(_cor_params(p), t),
    rhs=lambda p, t: _thm21_rhs(_cor_params(p), t),
    readings=(Reading("p", "convolution term carries (-1)^p, as stated for the equal-shift case"),
              Reading("p_plus_1", "convolution term carries (-1)^(p+1), as in thm_2_1")),
    default="p_plus_1",
    grid=_with_alpha(_grid(k=(1, 2, 3), N=(1, 2, 3), a=(1 / 3, 0.5, 0.7, 1.0)), ALPHA_RATIOS),
    quick=({"k": 1, "N": 1, "a": 1.0, "alpha": PI}, {"k": 2, "N": 2, "a": 0.7, "alpha": 2 * PI}),
    variant_grid=_with_alpha(_grid(k=(1, 2), N=(1, 2), a=(0.7,)), (0.5, 2.0)),
    ambiguity="sign (-1)^p vs (-1)^(p+1) of the convolution term",
    check=_cor22_check,
))


def _riemann_params(p: dict) -> dict:
    q = dict(p)
    q["a"] = q["b"] = 1.0
    return q


def _riemann_check(p: dict) -> None:
    _need(p, ("k", "N", "alpha"), "riemann_cor")
    _cap(p, k=3, N=3)


_register(IdentityEntry(
    id="riemann_cor",
    summary="a = b = 1 case of thm_2_1 (Riemann zeta convolution)",
    params=("k", "N", "alpha"),
    lhs=lambda p, t: _thm21_lhs(_riemann_params(p), t),
    rhs=lambda p, t: _thm21_rhs(_riemann_params(p), t),
    readings=(Reading("p", "convolution term carries (-1)^p, as stated for the Riemann case"),
              Reading("p_plus_1", "convolution term carries (-1)^(p+1), as in thm_2_1")),
    default="p_plus_1",
    grid=_with_alpha(_grid(k=(1, 2, 3), N=(1, 2, 3)), ALPHA_RATIOS),
    quick=({"k": 1, "N": 1, "alpha": PI}, {"k": 2, "N": 2, "alpha": 2 * PI}),
    variant_grid=_with_alpha(_grid(k=(1, 2), N=(1, 2)), (0.5, 2.0)),
    ambiguity="sign (-1)^p vs (-1)^(p+1) of the convolution term",
    check=_riemann_check,
))


def _thm21_double_lhs(p: dict, tag: str) -> Value:
    # beta^M' D1 - (-1)^N alpha^M' D2 where the double sums come out of the
    # two outer sums of the convolution identity: beta^M' D1 = -T_y/pi^2 and
    # (-1)^N alpha^M' D2 = T_x/pi^2
    k, N, a, b = p["k"], p["N"], p["a"], p["b"]
    alpha, _ = _ab(p)
    y, x = hurwitz_pair("unit", k, a, b, alpha)
    tx, ty = two_term_parts(ConvolutionInstance(y, x, N))
    return _combine([(-1 / PI ** 2, (ty.value, ty.bound)), (-1 / PI ** 2, (tx.value, tx.bound))])


def _thm21_double_rhs(p: dict, tag: str) -> Value:
    k, N, a, b = p["k"], p["N"], p["a"], p["b"]
    alpha, beta = _ab(p)
    return _exact([(-1) ** (q + 1) * _z(2 * k * q, a) * _z(2 * k * (N + 1 - q), b)
                   * alpha ** (k * q - 1) * beta ** (k * (N + 1 - q) - 1) for q in range(1, N + 1)])


_register(IdentityEntry(
    id="thm_2_1_double",
    summary="thm_2_1 with both kernels expanded into double sums",
    params=("k", "N", "a", "b", "alpha"),
    lhs=_thm21_double_lhs, rhs=_thm21_double_rhs,
    readings=(Reading("stated", "inner and outer sums over independent indices"),),
    default="stated",
    grid=_with_alpha(_grid(k=(1, 2, 3), N=(1, 2, 3), a=(1 / 3, 0.75), b=(0.5, 1.0)), ALPHA_RATIOS),
    quick=({"k": 1, "N": 2, "a": 1 / 3, "b": 0.5, "alpha": 2 * PI},),
    check=_thm21_check,
))


def thm_2_1_lhs_convolution_route(p: dict) -> Value:
    """thm_2_1 left side rebuilt from the two-term convolution identity.

    Each Psi sum splits into its elementary part, (2a-1)/(2 alpha) zeta(M+1, b)
    - C_k zeta(M, b), and a double sum; the double sums combine into the outer
    sums of the convolution identity for x_n = -(n+a)^2k/alpha^k,
    y_n = (n+b)^2k/beta^k with unit weights.
    """
    k, N, a, b = p["k"], p["N"], p["a"], p["b"]
    alpha, beta = _ab(p)
    M, Mp = 2 * k * (N + 1) - 1, k * (N + 1) - 1
    C = cos_constant(k)
    y, x = hurwitz_pair("unit", k, a, b, alpha)
    tx, ty = two_term_parts(ConvolutionInstance(y, x, N))
    e1 = (2 * a - 1) / (2 * alpha) * _z(M + 1, b) - C * _z(M, b)
    e2 = (2 * b - 1) / (2 * beta) * _z(M + 1, a) - C * _z(M, a)
    two = (tx.value + ty.value, tx.bound + ty.bound)
    return _combine([(beta ** Mp, (e1, 4 * EPS * abs(e1))), (-((-1) ** N) * alpha ** Mp, (e2, 4 * EPS * abs(e2))),
                     (-1 / PI ** 2, two)])


# ---------------------------------------------------------------------------
# k = 1 digamma form
# ---------------------------------------------------------------------------

def _k1_lhs(p: dict, tag: str) -> Value:
    N, a, b = p["N"], p["a"], p["b"]
    alpha, beta = _ab(p)
    return _exact([(-alpha) ** (N + 1 - j) * beta ** j * _z(2 * j, a) * _z(2 * N + 2 - 2 * j, b)
                   for j in range(1, N + 1)])


def _k1_rhs_complex(p: dict) -> tuple[complex, float]:
    N, a, b = p["N"], p["a"], p["b"]
    alpha, beta = _ab(p)
    w = _ratio(alpha)       # sqrt(alpha/beta) = alpha/pi
    v = 1.0 / w
    # i (psi(c+iy) - psi(c-iy)) = i * 2i * Im-part = -2 Im-part
    s1, e1 = digamma_line_sum("im", b, w, a, 2 * N + 1)
    s2, e2 = digamma_line_sum("im", a, v, b, 2 * N + 1)
    c1 = beta ** (N + 1) / 2 * w * -2
    c2 = (-alpha) ** (N + 1) / 2 * v * -2
    return c1 * s1 + c2 * s2, abs(c1) * e1 + abs(c2) * e2


def _k1_rhs(p: dict, tag: str) -> Value:
    val, bound = _k1_rhs_complex(p)
    return val.real, bound


def k1_digamma_imaginary_part(p: dict) -> float:
    """Imaginary part left over after the conjugate digamma pairs are combined."""
    return _k1_rhs_complex(p)[0].imag


def _k1_check(p: dict) -> None:
    _need(p, ("N", "a", "b", "alpha"), "k1_digamma")
    if p.get("k", 1) != 1:
        raise InvalidParams("k1_digamma is the k = 1 case")
    _cap(p, N=6)


_register(IdentityEntry(
    id="k1_digamma",
    summary="k = 1 form: even zeta convolution against two digamma sums",
    params=("N", "a", "b", "alpha"),
    lhs=_k1_lhs, rhs=_k1_rhs,
    readings=(Reading("stated", "digamma sums with i*sqrt(alpha/beta) and i*sqrt(beta/alpha)"),),
    default="stated",
    grid=_with_alpha(_grid(N=(1, 2, 3), a=(0.25, 0.5, 1.0), b=(1 / 3, 0.75, 1.0)), ALPHA_RATIOS),
    quick=({"N": 1, "a": 1.0, "b": 1.0, "alpha": PI}, {"N": 2, "a": 0.5, "b": 0.25, "alpha": PI}),
    check=_k1_check,
))


# ---------------------------------------------------------------------------
# exponential-sum identities (classical anchors)
# ---------------------------------------------------------------------------

def _classical_lhs(p: dict, tag: str) -> Value:
    n = p["n"]
    alpha, beta = _ab(p)
    z = _z(2 * n + 1, 1.0)
    ea = exp_weighted_sum(-(2 * n + 1), 2 * alpha)
    eb = exp_weighted_sum(-(2 * n + 1), 2 * beta)
    ca, cb = alpha ** -n, -((-beta) ** -n)
    return _combine([(ca, (z / 2, 0.0)), (ca, ea), (cb, (z / 2, 0.0)), (cb, eb)])


def _classical_rhs(p: dict, tag: str) -> Value:
    n = p["n"]
    alpha, beta = _ab(p)
    terms = []
    for j in range(0, n + 2):
        coef = Fraction((-1) ** (j - 1)) * _bern_frac(2 * j) * _bern_frac(2 * n - 2 * j + 2) / (
            math.factorial(2 * j) * math.factorial(2 * n - 2 * j + 2))
        terms.append(float(coef) * alpha ** (n - j + 1) * beta ** j)
    val, bound = _exact(terms)
    return 2.0 ** (2 * n) * val, 2.0 ** (2 * n) * bound


def _classical_check(p: dict) -> None:
    _need(p, ("n", "alpha"), "classical_ramanujan")
    n = p["n"]
    if not isinstance(n, int) or n == 0:
        raise InvalidParams(f"n must be a non-zero integer, got {n!r}")
    if abs(n) > 8:
        raise PrecisionLimit("|n| <= 8 is supported")


_register(IdentityEntry(
    id="classical_ramanujan",
    summary="Ramanujan's formula for zeta(2n+1), exponential sums only",
    params=("n", "alpha"),
    lhs=_classical_lhs, rhs=_classical_rhs,
    readings=(Reading("stated", "as stated; for n < 0 the Bernoulli sum keeps only its valid indices"),),
    default="stated",
    grid=_with_alpha(_grid(n=(-3, -2, -1, 1, 2, 3, 4)), ALPHA_RATIOS),
    quick=({"n": 1, "alpha": PI}, {"n": 2, "alpha": PI}, {"n": 1, "alpha": 2 * PI}),
    check=_classical_check,
))


def _pow_lhs(p: dict, tag: str) -> Value:
    m = p["m"]
    alpha, beta = _ab(p)
    return _combine([(alpha ** m, exp_weighted_sum(2 * m - 1, 2 * alpha)),
                     (-((-beta) ** m), exp_weighted_sum(2 * m - 1, 2 * beta))])


def _pow_rhs(p: dict, tag: str) -> Value:
    m = p["m"]
    alpha, beta = _ab(p)
    coef = float(_bern_frac(2 * m)) / (4 * m)
    return _exact([alpha ** m * coef, -((-beta) ** m) * coef])


def _pow_check(p: dict) -> None:
    _need(p, ("m", "alpha"), "ramanujan_power_sum")
    if p["m"] < 2:
        raise InvalidParams("the power-sum identity holds for m > 1 only")
    _cap(p, m=10)


_register(IdentityEntry(
    id="ramanujan_power_sum",
    summary="sums n^(2m-1)/(e^(2 alpha n)-1) against B_2m, m > 1",
    params=("m", "alpha"),
    lhs=_pow_lhs, rhs=_pow_rhs,
    readings=(Reading("stated", "as stated"),),
    default="stated",
    grid=_with_alpha(_grid(m=(2, 3, 4, 5)), ALPHA_RATIOS),
    quick=({"m": 2, "alpha": 2 * PI},),
    check=_pow_check,
))


# ---------------------------------------------------------------------------
# Bernoulli identities for Psi (thm1, prop, glaisher)
# ---------------------------------------------------------------------------

def _thm1_lhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    w = 2 * k * m + 1
    s1 = _ksum("psi", a, k, alpha, b, w, corrections=m)
    s2 = _ksum("psi", b, k, beta, a, w, corrections=m)
    return _combine([(alpha ** (k * m + 1), s1), ((-1) ** m * beta ** (k * m + 1), s2)])


def _thm1_rhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    q = 2 * k * m + 2
    den = 4 * k * (k * m + 1) / (2 * k * cos_constant(k))  # 4k(km+1) cos(pi(k-1)/2k)
    swap = tag.endswith("_swap")
    ba, bb = (b, a) if swap else (a, b)
    res = [(-1) ** (m + 1) * beta ** (k * m + 1) * bernoulli_polynomial_real(q, ba) / den,
           -(alpha ** (k * m + 1)) * bernoulli_polynomial_real(q, bb) / den]
    conv = [(-1) ** j * bernoulli_polynomial_real(2 * k * j + 1, a) * beta ** (k * j)
            * bernoulli_polynomial_real(2 * k * (m - j) + 1, b) * alpha ** (k * (m - j))
            / ((2 * k * j + 1) * (2 * k * (m - j) + 1)) for j in range(m + 1)]
    terms = res + conv
    if tag.startswith("negated"):
        terms = [-t for t in terms]
    return _exact(terms)


def _thm1_check(p: dict) -> None:
    _need(p, ("k", "m", "a", "b", "alpha"), "thm1")
    _cap(p, k=3, m=3)


_register(IdentityEntry(
    id="thm1",
    summary="Bernoulli identity for Psi sums with positive powers",
    params=("k", "m", "a", "b", "alpha"),
    lhs=_thm1_lhs, rhs=_thm1_rhs,
    readings=(
        Reading("negated", "right side with the opposite overall sign"),
        Reading("stated", "right side as stated"),
        Reading("negated_swap", "opposite sign, B_(2km+2)(a) and B_(2km+2)(b) exchanged"),
        Reading("stated_swap", "as stated with B_(2km+2)(a) and B_(2km+2)(b) exchanged"),
    ),
    default="negated",
    # generic shifts lose digits to t^(2km+1)-weighted rounding beyond km = 2;
    # at a, b in {1/2, 1} the kernel has an exact exponential form and goes further
    grid=_with_alpha(
        tuple(dict(c, k=k, m=m) for k, m in ((1, 1), (1, 2), (2, 1))
              for c in _grid(a=(1 / 3, 0.5, 0.75, 1.0), b=(0.25, 0.5, 1.0)))
        + tuple(dict(c, k=k, m=m) for k, m in ((1, 3), (2, 2), (3, 1))
                for c in _grid(a=(0.5, 1.0), b=(0.5, 1.0))),
        ALPHA_RATIOS),
    quick=({"k": 1, "m": 2, "a": 1.0, "b": 1.0, "alpha": PI}, {"k": 2, "m": 1, "a": 0.5, "b": 0.5, "alpha": 2 * PI}),
    variant_grid=(
        {"k": 1, "m": 1, "a": 1 / 3, "b": 0.25, "alpha": 2 * PI},
        {"k": 1, "m": 2, "a": 0.75, "b": 0.5, "alpha": PI / 2},
        {"k": 2, "m": 1, "a": 1 / 3, "b": 1.0, "alpha": 2 * PI},
        {"k": 1, "m": 1, "a": 0.75, "b": 1.0, "alpha": PI},
        {"k": 2, "m": 1, "a": 0.25, "b": 0.5, "alpha": 2 * PI},
        {"k": 1, "m": 2, "a": 1 / 3, "b": 1.0, "alpha": 2 * PI},
    ),
    ambiguity="overall sign of the right side and the pairing of a, b in the B_(2km+2) terms",
    check=_thm1_check,
))


def _prop_lhs(p: dict, tag: str) -> Value:
    return _thm1_lhs(dict(p, a=1.0, b=1.0), "")


def _prop_rhs(p: dict, tag: str) -> Value:
    k, m = p["k"], p["m"]
    alpha, beta = _ab(p)
    B = float(_bern_frac(2 * k * m + 2))
    den = 4 * k * (k * m + 1) / (2 * k * cos_constant(k))
    return _exact([alpha ** (k * m + 1) * B / den, -((-1) ** (m + 1)) * beta ** (k * m + 1) * B / den])


def _prop_check(p: dict) -> None:
    _need(p, ("k", "m", "alpha"), "prop")
    _cap(p, k=3, m=4)


_register(IdentityEntry(
    id="prop",
    summary="a = b = 1 case of thm1",
    params=("k", "m", "alpha"),
    lhs=_prop_lhs, rhs=_prop_rhs,
    readings=(Reading("stated", "as stated"),),
    default="stated",
    grid=_with_alpha(_grid(k=(1, 2, 3), m=(1, 2, 3)), ALPHA_RATIOS),
    quick=({"k": 1, "m": 2, "alpha": PI}, {"k": 2, "m": 2, "alpha": PI}),
    check=_prop_check,
))


def _glaisher_lhs(p: dict, tag: str) -> Value:
    k, q = p["k"], p["p"]
    return _ksum("psi", 1.0, k, PI, 1.0, 4 * k * q + 1)


def _glaisher_rhs(p: dict, tag: str) -> Value:
    k, q = p["k"], p["p"]
    den = 4 * k * (2 * k * q + 1) / (2 * k * cos_constant(k))
    return _exact([float(_bern_frac(4 * k * q + 2)) / den])


def _glaisher_check(p: dict) -> None:
    _need(p, ("k", "p"), "glaisher")
    if not (isinstance(p["p"], int) and p["p"] >= 1):
        raise InvalidParams("p must be a positive integer")
    _cap(p, k=3, p=3)


_register(IdentityEntry(
    id="glaisher",
    summary="sum n^(4kp+1) Psi(n, 1; k) at alpha = pi in closed form",
    params=("k", "p"),
    lhs=_glaisher_lhs, rhs=_glaisher_rhs,
    readings=(Reading("stated", "as stated"),),
    default="stated",
    grid=_grid(k=(1, 2), p=(1, 2, 3)) + ({"k": 3, "p": 1}, {"k": 3, "p": 2}),
    quick=({"k": 1, "p": 1}, {"k": 2, "p": 1}),
    check=_glaisher_check,
))


# ---------------------------------------------------------------------------
# Phi identities (thm2, odd_zeta, kernel_relation)
# ---------------------------------------------------------------------------

def _thm2_lhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    w = 2 * k * m - 1
    s1 = _ksum("phi", a, k, alpha, b, w, corrections=m)
    s2 = _ksum("phi", b, k, beta, a, w, corrections=m)
    return _combine([(alpha ** (k * m), s1), ((-1) ** m * beta ** (k * m), s2)])


def _thm2_rhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    q = 2 * k * m
    la, lb = math.log(_ratio(alpha)), math.log(_ratio(beta))
    g_sign = -1.0 if tag == "s0_gamma_flip" else 1.0
    second_at = 1 - q + (q if tag == "stated" else 0)   # d/ds zeta(s-2km+1, a) at s = 0 or s = 2km
    first = (bernoulli_polynomial_real(q, b) / q * (la + stieltjes_gamma0(a)) + _dz(1 - q, b))
    second = (bernoulli_polynomial_real(q, a) / q * (lb + g_sign * stieltjes_gamma0(b)) + _dz(second_at, a))
    terms = [-(alpha ** (k * m)) / PI * first, (-1) ** (m + 1) * beta ** (k * m) / PI * second]
    for j in range(1, m):
        terms.append((-1) ** j * beta ** (k * j) * bernoulli_polynomial_real(2 * k * j, a) * alpha ** (k * (m - j))
                     * bernoulli_polynomial_real(2 * k * (m - j), b) / (PI * (2 * k * j) * (2 * k * (m - j))))
    return _exact(terms)


def _thm2_check(p: dict) -> None:
    _need(p, ("k", "m", "a", "b", "alpha"), "thm2")
    _cap(p, k=3, m=3)


_register(IdentityEntry(
    id="thm2",
    summary="companion Bernoulli identity for Phi sums",
    params=("k", "m", "a", "b", "alpha"),
    lhs=_thm2_lhs, rhs=_thm2_rhs,
    readings=(
        Reading("s0", "both zeta derivatives taken at s = 0"),
        Reading("stated", "second zeta derivative taken at s = 2km"),
        Reading("s0_gamma_flip", "both derivatives at s = 0 with the sign of gamma0(b) reversed"),
    ),
    default="s0",
    grid=_with_alpha(
        tuple(dict(c, k=k, m=m) for k, m in ((1, 1), (1, 2), (2, 1))
              for c in _grid(a=(1 / 3, 0.5, 0.75, 1.0), b=(0.25, 0.5, 1.0))),
        ALPHA_RATIOS),
    quick=({"k": 1, "m": 1, "a": 1.0, "b": 1.0, "alpha": 2 * PI}, {"k": 1, "m": 2, "a": 0.5, "b": 0.5, "alpha": PI},
           {"k": 2, "m": 1, "a": 1.0, "b": 1.0, "alpha": PI}),
    variant_grid=(
        {"k": 1, "m": 1, "a": 1 / 3, "b": 0.25, "alpha": 2 * PI},
        {"k": 1, "m": 2, "a": 0.75, "b": 0.5, "alpha": PI / 2},
        {"k": 2, "m": 1, "a": 1 / 3, "b": 1.0, "alpha": 2 * PI},
        {"k": 1, "m": 1, "a": 0.75, "b": 1.0, "alpha": PI},
        {"k": 2, "m": 1, "a": 0.25, "b": 0.5, "alpha": PI / 2},
        {"k": 1, "m": 2, "a": 1 / 3, "b": 0.75, "alpha": 2 * PI},
    ),
    ambiguity="point at which the second zeta derivative is taken, and the sign of gamma0(b)",
    check=_thm2_check,
))


def _odd_lhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    w1 = 2 * k * m + 1
    w2 = 2 * m + 1 if tag.startswith("stated") else w1
    s1 = _ksum("phi", a, k, alpha, b, -w1)
    s2 = _ksum("phi", b, k, beta, a, -w2)
    return _combine([(beta ** (k * m), s1), ((-(alpha ** k)) ** m, s2)])


def _odd_rhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    w = 2 * k * m + 1
    la = math.log(_ratio(alpha))
    l2 = math.log(_ratio(beta)) if tag.endswith("log_beta") else la
    terms = [(-1) ** i * alpha ** (k * i) * _z(2 * k * i + 1, a) * beta ** (k * (m - i))
             * _z(2 * k * (m - i) + 1, b) / PI for i in range(1, m)]
    terms.append(beta ** (k * m) / PI * (_z(w, b) * (la + stieltjes_gamma0(a)) - _dz(w, b)))
    terms.append((-1) ** m * alpha ** (k * m) / PI * (_z(w, a) * (stieltjes_gamma0(b) - l2) - _dz(w, a)))
    return _exact(terms)


def _odd_check(p: dict) -> None:
    _need(p, ("k", "m", "a", "b", "alpha"), "odd_zeta")
    _cap(p, k=3, m=3)


_register(IdentityEntry(
    id="odd_zeta",
    summary="Phi sums against an odd zeta convolution with log and derivative terms",
    params=("k", "m", "a", "b", "alpha"),
    lhs=_odd_lhs, rhs=_odd_rhs,
    readings=(
        Reading("exp_2km", "second sum with exponent 2km+1, bracket with log(alpha/pi)"),
        Reading("stated", "second sum with exponent 2m+1, bracket with log(alpha/pi)"),
        Reading("exp_2km_log_beta", "second sum with exponent 2km+1, bracket with log(beta/pi)"),
        Reading("stated_log_beta", "second sum with exponent 2m+1, bracket with log(beta/pi)"),
    ),
    default="exp_2km",
    grid=_with_alpha(_grid(k=(1, 2, 3), m=(1, 2, 3), a=(1 / 3, 0.5, 1.0), b=(0.25, 0.75, 1.0)), ALPHA_RATIOS),
    quick=({"k": 1, "m": 2, "a": 1.0, "b": 1.0, "alpha": PI}, {"k": 1, "m": 3, "a": 0.5, "b": 0.5, "alpha": 2 * PI},
           {"k": 2, "m": 2, "a": 1.0, "b": 1.0, "alpha": PI}),
    variant_grid=(
        {"k": 2, "m": 1, "a": 1 / 3, "b": 0.75, "alpha": 2 * PI},
        {"k": 2, "m": 2, "a": 0.5, "b": 0.25, "alpha": PI / 2},
        {"k": 3, "m": 1, "a": 1.0, "b": 0.75, "alpha": 2 * PI},
        {"k": 2, "m": 1, "a": 0.75, "b": 1.0, "alpha": PI / 2},
        {"k": 3, "m": 2, "a": 1 / 3, "b": 0.5, "alpha": 2 * PI},
        {"k": 2, "m": 3, "a": 0.25, "b": 1.0, "alpha": PI / 2},
    ),
    ambiguity="exponent of the second sum (2m+1 or 2km+1) and the log argument in the second bracket",
    lhs_key=lambda tag: "2m" if tag.startswith("stated") else "2km",
    check=_odd_check,
))


def _krel_lhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    w = 2 * k * m
    s1 = _ksum("phi", a, k, alpha, b, -w)
    s2 = _ksum("psi", b, k, beta, a, -w)
    return _combine([(beta ** (k * m), s1), (PI * (-1) ** (m - 1) * alpha ** (k * m - 1), s2)])


def _krel_rhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    w = 2 * k * m
    la = math.log(_ratio(alpha))
    den = 2 * math.sin(PI / (2 * k)) if tag.startswith("two_sin") else 2 * k * math.sin(PI / (2 * k))
    upper = m - 1 if tag.endswith("upper_m_minus_1") else m
    terms = [beta ** (k * m) / PI * (_z(w, b) * (la + stieltjes_gamma0(a)) - _dz(w, b)),
             (-1) ** m * PI * alpha ** (k * m - 1) * _z(w, a) / den]
    for i in range(1, upper + 1):
        terms.append((-1) ** i * alpha ** (k * i) * _z(2 * k * i + 1, a) * beta ** (k * (m - i))
                     * _z(2 * k * (m - i), b) / PI)
    return _exact(terms)


def _krel_check(p: dict) -> None:
    _need(p, ("k", "m", "a", "b", "alpha"), "kernel_relation")
    _cap(p, k=3, m=3)


_register(IdentityEntry(
    id="kernel_relation",
    summary="mixed Phi / Psi sums against zeta values",
    params=("k", "m", "a", "b", "alpha"),
    lhs=_krel_lhs, rhs=_krel_rhs,
    readings=(
        Reading("stated", "convolution up to i = m, constant with 2k sin(pi/2k)"),
        Reading("upper_m_minus_1", "convolution up to i = m-1, as in the double-sum form"),
        Reading("two_sin", "convolution up to i = m, constant with 2 sin(pi/2k)"),
        Reading("two_sin_upper_m_minus_1", "convolution up to i = m-1, constant with 2 sin(pi/2k)"),
    ),
    default="stated",
    grid=_with_alpha(_grid(k=(1, 2, 3), m=(1, 2, 3), a=(1 / 3, 0.75, 1.0), b=(0.25, 0.5, 1.0)), ALPHA_RATIOS),
    quick=({"k": 1, "m": 1, "a": 1.0, "b": 1.0, "alpha": PI}, {"k": 1, "m": 2, "a": 0.75, "b": 0.25, "alpha": PI},
           {"k": 2, "m": 1, "a": 1.0, "b": 1.0, "alpha": PI}),
    variant_grid=(
        {"k": 2, "m": 1, "a": 1 / 3, "b": 0.25, "alpha": 2 * PI},
        {"k": 2, "m": 2, "a": 0.75, "b": 0.75, "alpha": PI / 2},
        {"k": 3, "m": 1, "a": 1.0, "b": 0.25, "alpha": 2 * PI},
        {"k": 2, "m": 1, "a": 0.5, "b": 1 / 3, "alpha": PI / 2},
        {"k": 3, "m": 2, "a": 1 / 3, "b": 0.75, "alpha": 2 * PI},
        {"k": 2, "m": 3, "a": 0.25, "b": 0.4, "alpha": PI / 2},
    ),
    ambiguity="upper limit of the convolution term and the normalization of the cosine constant",
    check=_krel_check,
))


# double-sum forms built from the outer sums of the convolution identity

def _odd_double_lhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    y, x = hurwitz_pair("odd", k, a, b, alpha)
    tx, ty = two_term_parts(ConvolutionInstance(y, x, m - 1))
    pk = PI ** (2 * k)
    # T_y = -pi^2k beta^k(m-1) D_y;  T_x = -(-1)^m pi^2k alpha^k(m-1) D_x
    dy = (-ty.value / (pk * beta ** (k * (m - 1))), ty.bound / (pk * beta ** (k * (m - 1))))
    first = (-(PI ** (2 * k - 1)) * beta ** (k * (m - 1)), dy)
    if tag == "derived":
        dx = (-tx.value / ((-1) ** m * pk * alpha ** (k * (m - 1))), tx.bound / (pk * alpha ** (k * (m - 1))))
        second = (-((-1) ** m) * PI ** (2 * k - 1) * alpha ** (k * (m - 1)), dx)
    else:
        # stated: denominators beta^k (i+b)^2k + alpha^k (n+a)^2k, i.e. the x-side
        # double sum of the pair with alpha and beta exchanged
        ys, xs = hurwitz_pair("odd", k, a, b, beta)
        txs, _ = two_term_parts(ConvolutionInstance(ys, xs, m - 1))
        dxs = (-txs.value / ((-1) ** m * pk * beta ** (k * (m - 1))), txs.bound / (pk * beta ** (k * (m - 1))))
        second = (-(PI ** (2 * k - 1)) * (-alpha) ** (k * (m - 1)), dxs)
    return _combine([first, second])


def _odd_double_rhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    return _exact([(-1) ** i * alpha ** (k * i) * _z(2 * k * i + 1, a) * beta ** (k * (m - i))
                   * _z(2 * k * (m - i) + 1, b) / PI for i in range(1, m)])


def _double_check(name: str) -> Callable[[dict], None]:
    def check(p: dict) -> None:
        _need(p, ("k", "m", "a", "b", "alpha"), name)
        if p["m"] < 2:
            raise InvalidParams(f"{name} needs m >= 2")
        _cap(p, k=3, m=3)
    return check


_register(IdentityEntry(
    id="odd_zeta_double",
    summary="odd_zeta with both Phi kernels expanded into double sums",
    params=("k", "m", "a", "b", "alpha"),
    lhs=_odd_double_lhs, rhs=_odd_double_rhs,
    readings=(
        Reading("derived", "second term with sign (-1)^m and denominators alpha^k (i+b)^2k + beta^k (n+a)^2k"),
        Reading("stated", "second term with (-alpha)^k(m-1) and denominators beta^k (i+b)^2k + alpha^k (n+a)^2k"),
    ),
    default="derived",
    grid=_with_alpha(_grid(k=(1, 2, 3), m=(2, 3), a=(1 / 3, 1.0), b=(0.25, 0.75)), ALPHA_RATIOS),
    quick=({"k": 1, "m": 2, "a": 1 / 3, "b": 0.75, "alpha": 2 * PI},),
    variant_grid=(
        {"k": 1, "m": 2, "a": 0.3, "b": 0.7, "alpha": 2 * PI},
        {"k": 2, "m": 2, "a": 0.3, "b": 0.7, "alpha": PI / 2},
        {"k": 2, "m": 3, "a": 0.25, "b": 0.6, "alpha": 2 * PI},
        {"k": 1, "m": 3, "a": 0.5, "b": 0.8, "alpha": PI / 2},
    ),
    ambiguity="sign and alpha/beta placement in the second double sum",
    lhs_key=lambda tag: tag,
    check=_double_check("odd_zeta_double"),
))


def _krel_double_lhs(p: dict, tag: str) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, _ = _ab(p)
    y, x = hurwitz_pair("mixed", k, a, b, alpha)
    tx, ty = two_term_parts(ConvolutionInstance(y, x, m - 1))
    # first double-sum term = T_x/pi, second = -T_y/pi
    value, bound = _combine([(1 / PI, (tx.value, tx.bound)), (1 / PI, (ty.value, ty.bound))])
    if tag == "stated":
        conv = _krel_double_conv(p)
        return value + conv[0], bound + conv[1]
    return value, bound


def _krel_double_conv(p: dict) -> Value:
    k, m, a, b = p["k"], p["m"], p["a"], p["b"]
    alpha, beta = _ab(p)
    return _exact([(-1) ** i * alpha ** (k * i) * _z(2 * k * i + 1, a) * beta ** (k * (m - i))
                   * _z(2 * k * (m - i), b) / PI for i in range(1, m)])


def _krel_double_rhs(p: dict, tag: str) -> Value:
    return (0.0, 0.0) if tag == "stated" else _krel_double_conv(p)


_register(IdentityEntry(
    id="kernel_relation_double",
    summary="kernel_relation with both kernels expanded into double sums",
    params=("k", "m", "a", "b", "alpha"),
    lhs=_krel_double_lhs, rhs=_krel_double_rhs,
    readings=(
        Reading("equals_sum", "the two double-sum terms equal the convolution sum"),
        Reading("stated", "the two double-sum terms plus the convolution sum vanish"),
    ),
    default="equals_sum",
    grid=_with_alpha(_grid(k=(1, 2, 3), m=(2, 3), a=(1 / 3, 1.0), b=(0.25, 0.75)), ALPHA_RATIOS),
    quick=({"k": 1, "m": 2, "a": 1 / 3, "b": 0.75, "alpha": 2 * PI},),
    variant_grid=(
        {"k": 1, "m": 2, "a": 0.3, "b": 0.7, "alpha": 2 * PI},
        {"k": 2, "m": 2, "a": 0.75, "b": 0.25, "alpha": PI / 2},
        {"k": 2, "m": 3, "a": 0.25, "b": 0.6, "alpha": 2 * PI},
        {"k": 1, "m": 3, "a": 0.5, "b": 0.8, "alpha": PI},
    ),
    ambiguity="whether the convolution sum sits on the other side of the equation",
    lhs_key=lambda tag: tag,
    check=_double_check("kernel_relation_double"),
))


# ---------------------------------------------------------------------------
# k = a = b = 1 digamma companions
# ---------------------------------------------------------------------------

def _herglotz_lhs(p: dict, tag: str) -> Value:
    m = p["m"]
    alpha, beta = _ab(p)
    scale = 2.0 if tag == "scale_2" else 1.0
    a2, b2 = scale * alpha, scale * beta      # the pair with a2 * b2 = scale^2 pi^2
    parts = []
    for coef, x in (((-b2) ** -m, b2), (a2 ** -m, a2)):
        # psi(inx/2pi) + psi(-inx/2pi) = 2 Re psi(1 + i n x/2pi)
        s, e = digamma_line_sum("re", 1.0, x / (2 * PI), 1.0, 2 * m + 1)
        z = riemann_zeta(float(2 * m + 1))
        parts.append((coef, (2 * EULER_GAMMA * z + 2 * s.real, 2 * e)))
    return _combine(parts)


def _herglotz_rhs(p: dict, tag: str) -> Value:
    m = p["m"]
    alpha, beta = _ab(p)
    scale = 2.0 if tag == "scale_2" else 1.0
    a2, b2 = scale * alpha, scale * beta
    return _exact([-2 * (-1) ** j * riemann_zeta(float(2 * j + 1)) * riemann_zeta(float(2 * m - 2 * j + 1))
                   * a2 ** (j - m) * b2 ** -j for j in range(1, m)])


def _herglotz_check(p: dict) -> None:
    _need(p, ("m", "alpha"), "herglotz")
    _cap(p, m=8)


_register(IdentityEntry(
    id="herglotz",
    summary="digamma sums against an odd zeta convolution (product 4 pi^2 convention)",
    params=("m", "alpha"),
    lhs=_herglotz_lhs, rhs=_herglotz_rhs,
    readings=(
        Reading("scale_2", "evaluate at (2 alpha, 2 beta), whose product is 4 pi^2"),
        Reading("scale_1", "evaluate at (alpha, beta) directly"),
    ),
    default="scale_2",
    grid=_with_alpha(_grid(m=(1, 2, 3, 4)), ALPHA_RATIOS),
    quick=({"m": 2, "alpha": PI},),
    variant_grid=_with_alpha(_grid(m=(2, 3)), (0.5, 2.0)),
    ambiguity="how the product-4-pi^2 parameters map onto alpha * beta = pi^2",
    lhs_key=lambda tag: tag,
    check=_herglotz_check,
))


def _oddeven_lhs(p: dict, tag: str) -> Value:
    m = p["m"]
    alpha, beta = _ab(p)
    if tag == "stated":
        return math.nan, math.inf  # the n = 0 term 0^(-2m)/(e^0 - 1) is undefined
    z2m = riemann_zeta(float(2 * m))
    e = exp_weighted_sum(-2 * m, 2 * beta)
    parts = [(beta ** -(m - 0.5), (z2m / 2, 0.0)), (beta ** -(m - 0.5), e)]
    for j in range(m):
        c = -((-1) ** (j + 1)) * _z(2 * j, 1.0) * riemann_zeta(float(2 * m - 2 * j + 1)) / PI ** (2 * j)
        parts.append((c * beta ** (2 * j - m - 0.5), (1.0, 0.0)))
    return _combine(parts)


def _oddeven_rhs(p: dict, tag: str) -> Value:
    m = p["m"]
    alpha, _ = _ab(p)
    s, e = digamma_line_sum("re", 1.0, _ratio(alpha), 1.0, 2 * m)
    inner = EULER_GAMMA * riemann_zeta(float(2 * m)) / PI + s.real / PI
    c = (-1) ** (m + 1) * alpha ** -(m - 0.5)
    return c * inner, abs(c) * (e / PI + 4 * EPS * abs(inner))


def _oddeven_check(p: dict) -> None:
    _need(p, ("m", "alpha"), "odd_even")
    _cap(p, m=8)


_register(IdentityEntry(
    id="odd_even",
    summary="exponential sums at even zeta against digamma sums (k = a = b = 1 kernel relation)",
    params=("m", "alpha"),
    lhs=_oddeven_lhs, rhs=_oddeven_rhs,
    readings=(
        Reading("n_from_1", "exponential sum over n >= 1"),
        Reading("stated", "exponential sum over n >= 0 (undefined n = 0 term)"),
    ),
    default="n_from_1",
    grid=_with_alpha(_grid(m=(1, 2, 3, 4)), ALPHA_RATIOS),
    quick=({"m": 1, "alpha": PI},),
    variant_grid=_with_alpha(_grid(m=(1, 2)), (0.5, 2.0)),
    ambiguity="starting index of the exponential sum",
    lhs_key=lambda tag: tag,
    check=_oddeven_check,
))


# ---------------------------------------------------------------------------
# evaluation and variant resolution
# ---------------------------------------------------------------------------

_ANCHOR_IDS = {"riemann_cor", "prop", "glaisher", "ramanujan_power_sum", "herglotz", "odd_even"}


def default_tol(case: IdentityCase) -> float:
    """1e-11 for the exponential-sum anchor, 1e-10 for k = 1 cases at a = b = 1, 1e-7 otherwise."""
    p = case.params
    if case.id == "classical_ramanujan":
        return 1e-11
    unit_shift = p.get("a", 1.0) == 1.0 and p.get("b", p.get("a", 1.0)) == 1.0
    if unit_shift and p.get("k", 1) == 1 and (case.id in _ANCHOR_IDS or "a" in p):
        return 1e-10
    return 1e-7


def _entry(ident: str) -> IdentityEntry:
    try:
        return REGISTRY[ident]
    except KeyError:
        raise InvalidParams(f"unknown identity {ident!r}; known: {', '.join(sorted(REGISTRY))}") from None


_NON_EVALUABLE = (PoleAt1, PoleAtNonposInt, OnPole)


def evaluate_reading(case: IdentityCase, tag: str, tol: float | None = None,
                     _cache: dict | None = None) -> IdentityReport:
    """Report for one named reading; a reading that lands on a pole gets an infinite residual.

    Raises PrecisionLimit when the certified error bound of the two sides
    already exceeds tol, since the residual would then say nothing.
    """
    entry = _entry(case.id)
    entry.reading(tag)
    p = dict(case.params)
    entry.check(p)
    tol = default_tol(case) if tol is None else tol
    key = entry.lhs_key(tag)
    if _cache is not None and key in _cache:
        lhs, lb = _cache[key]
    else:
        try:
            lhs, lb = entry.lhs(p, tag)
        except _NON_EVALUABLE:
            lhs, lb = math.nan, math.inf
        if _cache is not None:
            _cache[key] = (lhs, lb)
    try:
        rhs, rb = entry.rhs(p, tag)
    except _NON_EVALUABLE:
        rhs, rb = math.nan, math.inf
    if math.isfinite(lhs) and math.isfinite(rhs):
        scale = max(abs(lhs), abs(rhs), 1.0)
        if (lb + rb) / scale > tol:
            raise PrecisionLimit(
                f"{case.id} at {p}: certified error bound {(lb + rb) / scale:.1e} (relative) exceeds tol {tol:.0e}; "
                "binary64 cancellation leaves no headroom here")
    return make_report(case.with_variant(tag), lhs, rhs, lb + rb, tag, tol)


def evaluate(case: IdentityCase, tol: float | None = None) -> IdentityReport:
    """Evaluate an identity case.

    With ``case.variant`` set, that reading is reported as is.  Otherwise the
    resolved reading is tried first; if it misses the tolerance the other
    readings are tried, and VariantUnresolved is raised when none fits.
    """
    entry = _entry(case.id)
    if case.variant is not None:
        return evaluate_reading(case, case.variant, tol)
    cache: dict = {}
    first = evaluate_reading(case, entry.default, tol, cache)
    if first.passed or len(entry.readings) == 1:
        return first
    reports = [first]
    for tag in entry.tags:
        if tag == entry.default:
            continue
        rep = evaluate_reading(case, tag, tol, cache)
        if rep.passed:
            return rep
        reports.append(rep)
    raise VariantUnresolved(
        f"{case.id}: no reading meets tol at {case.params}; best rel residual "
        f"{min(r.rel_residual for r in reports):.3e}", reports)


def _case(ident: str, p: dict, variant: str | None) -> IdentityCase:
    return IdentityCase(ident, dict(p), variant)


def _eval_for(ident: str) -> Callable[..., IdentityReport]:
    def run(case: IdentityCase | dict, tol: float | None = None) -> IdentityReport:
        if isinstance(case, dict):
            case = _case(ident, case, None)
        if case.id != ident:
            raise InvalidParams(f"expected a {ident} case, got {case.id}")
        return evaluate(case, tol)
    run.__name__ = f"eval_{ident}"
    run.__doc__ = f"Evaluate a {ident} case: {_entry(ident).summary}."
    return run


eval_thm_2_1 = _eval_for("thm_2_1")
eval_cor_2_2 = _eval_for("cor_2_2")
eval_riemann_cor = _eval_for("riemann_cor")
eval_thm_2_1_double = _eval_for("thm_2_1_double")
eval_k1_digamma = _eval_for("k1_digamma")
eval_classical_ramanujan = _eval_for("classical_ramanujan")
eval_ramanujan_power_sum = _eval_for("ramanujan_power_sum")
eval_thm1 = _eval_for("thm1")
eval_prop = _eval_for("prop")
eval_glaisher = _eval_for("glaisher")
eval_thm2 = _eval_for("thm2")
eval_odd_zeta = _eval_for("odd_zeta")
eval_odd_zeta_double = _eval_for("odd_zeta_double")
eval_kernel_relation = _eval_for("kernel_relation")
eval_kernel_relation_double = _eval_for("kernel_relation_double")
eval_herglotz = _eval_for("herglotz")
eval_odd_even = _eval_for("odd_even")


@dataclass(frozen=True)
class VariantResolution:
    id: str
    winner: str
    note: str
    ambiguity: str
    residuals: dict[str, tuple[float, ...]]   # per reading, one rel residual per grid case
    grid: tuple[dict, ...]
    separation: float                           # min loser residual / max winner residual
    readings: dict[str, str] | None = None      # only for ambiguities outside REGISTRY

    def errata_entry(self) -> dict[str, Any]:
        readings = self.readings or {r.tag: r.note for r in _entry(self.id).readings}
        return {
            "id": self.id,
            "ambiguity": self.ambiguity,
            "readings": dict(readings),
            "max_residual": {t: max(v) for t, v in self.residuals.items()},
            "min_residual": {t: min(v) for t, v in self.residuals.items()},
            "resolved": self.winner,
            "separation": self.separation,
            "note": self.note,
        }


def resolve_variant(ident: str, grid: Iterable[dict] | None = None, tol: float | None = None) -> VariantResolution:
    """Evaluate every reading on the grid and return the unique one that fits.

    The winner must meet the tolerance on every case, and every other reading
    must miss by a factor of at least 1e3 on every case.
    """
    entry = _entry(ident)
    if len(entry.readings) < 2:
        raise InvalidParams(f"{ident} has a single reading")
    cases = tuple(grid) if grid is not None else entry.variant_grid
    if not cases:
        raise InvalidParams(f"{ident} has no variant grid")
    residuals: dict[str, list[float]] = {t: [] for t in entry.tags}
    fits = {t: True for t in entry.tags}
    for params in cases:
        case = _case(ident, params, None)
        cache: dict = {}
        for tag in entry.tags:
            rep = evaluate_reading(case, tag, tol, cache)
            residuals[tag].append(rep.rel_residual)
            fits[tag] = fits[tag] and rep.passed
    winners = [t for t in entry.tags if fits[t]]
    frozen = {t: tuple(v) for t, v in residuals.items()}
    if len(winners) != 1:
        raise VariantUnresolved(f"{ident}: {len(winners)} readings fit the grid ({', '.join(winners) or 'none'})")
    win = winners[0]
    worst = max(frozen[win])
    losers = min(min(v) for t, v in frozen.items() if t != win)
    separation = losers / worst if worst > 0 else math.inf
    if not separation >= SEPARATION:
        raise VariantUnresolved(f"{ident}: winner {win} separated by only {separation:.3g}")
    chosen = entry.reading(win)
    note = f"{chosen.note}; max residual {worst:.2e}, every other reading >= {losers:.2e}"
    return VariantResolution(ident, win, note, entry.ambiguity, frozen, cases, separation)


def ambiguous_ids() -> tuple[str, ...]:
    return tuple(i for i, e in REGISTRY.items() if len(e.readings) > 1)


# ---------------------------------------------------------------------------
# route equivalence: kernel-sum route against the convolution route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RouteComparison:
    series: float
    series_bound: float
    convolution: float
    convolution_bound: float

    @property
    def difference(self) -> float:
        return abs(self.series - self.convolution)


def thm_2_1_routes(params: dict) -> RouteComparison:
    _thm21_check(params)
    s = _thm21_lhs(params, "")
    c = thm_2_1_lhs_convolution_route(params)
    return RouteComparison(s[0], s[1], c[0], c[1])


def odd_zeta_routes(params: dict) -> RouteComparison:
    """odd_zeta left side (2km+1 in both sums) by kernel sums and by the convolution identity."""
    _double_check("odd_zeta")(params)
    k, m, a, b = params["k"], params["m"], params["a"], params["b"]
    alpha, beta = _ab(params)
    w = 2 * k * m + 1
    r = math.log(_ratio(alpha))
    y, x = hurwitz_pair("odd", k, a, b, alpha)
    tx, ty = two_term_parts(ConvolutionInstance(y, x, m - 1))
    e1 = (r + stieltjes_gamma0(a)) * _z(w, b) - _dz(w, b)
    e2 = (-r + stieltjes_gamma0(b)) * _z(w, a) - _dz(w, a)
    conv = _combine([(beta ** (k * m) / PI, (e1, 4 * EPS * abs(e1))),
                     ((-(alpha ** k)) ** m / PI, (e2, 4 * EPS * abs(e2))),
                     (1 / PI, (tx.value + ty.value, tx.bound + ty.bound))])
    s = _odd_lhs(params, "exp_2km")
    return RouteComparison(s[0], s[1], conv[0], conv[1])


def kernel_relation_routes(params: dict) -> RouteComparison:
    """kernel_relation left side by kernel sums and by the convolution identity."""
    _double_check("kernel_relation")(params)
    k, m, a, b = params["k"], params["m"], params["a"], params["b"]
    alpha, beta = _ab(params)
    w = 2 * k * m
    r = math.log(_ratio(alpha))
    y, x = hurwitz_pair("mixed", k, a, b, alpha)
    tx, ty = two_term_parts(ConvolutionInstance(y, x, m - 1))
    e1 = (r + stieltjes_gamma0(a)) * _z(w, b) - _dz(w, b)
    e2 = (2 * b - 1) / (2 * beta) * _z(w + 1, a) - cos_constant(k) * _z(w, a)
    conv = _combine([(beta ** (k * m) / PI, (e1, 4 * EPS * abs(e1))),
                     (PI * (-1) ** (m - 1) * alpha ** (k * m - 1), (e2, 4 * EPS * abs(e2))),
                     (1 / PI, (tx.value + ty.value, tx.bound + ty.bound))])
    s = _krel_lhs(params, "stated")
    return RouteComparison(s[0], s[1], conv[0], conv[1])

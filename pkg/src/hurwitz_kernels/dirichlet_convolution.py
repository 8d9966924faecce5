"""Dirichlet series over weighted zero sequences and their convolutions.

For zeros x_n and weights a_n,

    zeta_{x,a}(N) = sum_n a_n / x_n^N,      psi_{x,a}(z) = sum_n a_n z / (x_n - z),

and the two-term convolution identity reads

    sum_{j=1}^{N} zeta_{y,b}(j) zeta_{x,a}(N+1-j)
        = sum_n a_n psi_y(x_n) / x_n^(N+1) + sum_n b_n psi_x(y_n) / y_n^(N+1).

Sequences come as index callbacks plus a tail descriptor.  Power-law
sequences x_n = sign * scale * (n+shift)^growth, a_n = (n+shift)^-decay get
closed-form Hurwitz zeta tails; the outer sums of the two-term identity use
the large-argument (Mellin residue) expansion of the generating function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DivergentAtOrder, InvalidParams, OnPole, ToleranceUnreachable
from .report import IdentityCase, IdentityReport, make_report
from .special_functions import (
    fsum_complex,
    hurwitz_zeta,
    hurwitz_zeta_scaled,
    hurwitz_zeta_sderiv,
    stieltjes_gamma0,
    zeta_real,
)

EPS = 2.0 ** -52
MAX_DIRECT = 1 << 22
MAX_GEOM = 200


@dataclass(frozen=True)
class TailClass:
    """|x_n| >= scale*(n+shift)^growth and |a_n| <= (n+shift)^-decay beyond the head.

    With exact=True the sequence is the real power law itself,
    x_n = sign*scale*(n+shift)^growth and a_n = (n+shift)^-decay.
    """

    growth: float
    decay: float
    scale: float = 1.0
    shift: float = 0.0
    sign: int = 1
    exact: bool = False

    def __post_init__(self) -> None:
        if not (self.growth > 0 and self.scale > 0):
            raise InvalidParams("tail class needs growth > 0 and scale > 0")
        if self.sign not in (1, -1):
            raise InvalidParams("sign must be +1 or -1")


@dataclass(frozen=True)
class WeightedSequence:
    zero: Callable[[int], complex]
    weight: Callable[[int], complex]
    base: int = 1
    tail: TailClass | None = None
    support: int | None = None  # number of terms when the sequence is finite
    label: str = ""

    def __post_init__(self) -> None:
        if self.base not in (0, 1):
            raise InvalidParams("base index must be 0 or 1")
        if (self.tail is None) == (self.support is None):
            raise InvalidParams("give exactly one of tail class or finite support")

    @property
    def is_finite(self) -> bool:
        return self.support is not None

    @property
    def is_power_law(self) -> bool:
        return self.tail is not None and self.tail.exact

    def indices(self) -> range:
        assert self.support is not None
        return range(self.base, self.base + self.support)

    def offset(self, n: int) -> float:
        """n + shift, the Hurwitz parameter of the tail starting at index n."""
        assert self.tail is not None
        return n + self.tail.shift


@dataclass(frozen=True)
class ConvolutionInstance:
    left: WeightedSequence   # y, b
    right: WeightedSequence  # x, a
    order: int               # N; the convolution is evaluated at N+1

    def __post_init__(self) -> None:
        if not (isinstance(self.order, int) and self.order >= 1):
            raise InvalidParams(f"order must be ≥ 1, got {self.order!r}")


@dataclass(frozen=True)
class Valued:
    value: complex | float
    bound: float


def _real_if_possible(z: complex | float) -> complex | float:
    if isinstance(z, complex) and z.imag == 0.0:
        return z.real
    return z


# ---------------------------------------------------------------------------
# sequence constructors
# ---------------------------------------------------------------------------

def power_law(sign: int, scale: float, growth: float, decay: float, shift: float,
              base: int = 0, label: str = "") -> WeightedSequence:
    """x_n = sign*scale*(n+shift)^growth with weights (n+shift)^-decay, n >= base."""
    if base + shift <= 0:
        raise InvalidParams("n + shift must stay positive")

    def zero(n: int) -> float:
        return sign * scale * (n + shift) ** growth

    def weight(n: int) -> float:
        return (n + shift) ** -decay

    tail = TailClass(growth, decay, scale, shift, sign, exact=True)
    return WeightedSequence(zero, weight, base, tail=tail, label=label)


def finite_sequence(zeros: Sequence[complex], weights: Sequence[complex], base: int = 1,
                    label: str = "") -> WeightedSequence:
    if len(zeros) != len(weights) or not zeros:
        raise InvalidParams("zeros and weights must be non-empty and of equal length")
    if any(z == 0 for z in zeros):
        raise InvalidParams("zeros must be non-zero")
    zs, ws = tuple(zeros), tuple(weights)
    return WeightedSequence(lambda n: zs[n - base], lambda n: ws[n - base], base,
                            support=len(zs), label=label)


def hurwitz_pair(kind: str, k: int, a: float, b: float, alpha: float) -> tuple[WeightedSequence, WeightedSequence]:
    """(y, x) sequences of the convolution identities.

    x_n = -(n+a)^2k / alpha^k and y_n = (n+b)^2k / beta^k, n >= 0, with weights
      "unit":  a_n = b_n = 1
      "odd":   a_n = 1/(n+a), b_n = 1/(n+b)
      "mixed": a_n = 1/(n+a), b_n = 1
    """
    beta = math.pi ** 2 / alpha
    if kind not in ("unit", "odd", "mixed"):
        raise InvalidParams(f"unknown instantiation {kind!r}")
    dx = 0.0 if kind == "unit" else 1.0
    dy = 1.0 if kind == "odd" else 0.0
    x = power_law(-1, alpha ** -k, 2 * k, dx, a, 0, label=f"x[{kind}]")
    y = power_law(1, beta ** -k, 2 * k, dy, b, 0, label=f"y[{kind}]")
    return y, x


# ---------------------------------------------------------------------------
# Dirichlet series
# ---------------------------------------------------------------------------

def _tail_exponent(t: TailClass, N: float) -> float:
    return t.growth * N + t.decay


def dirichlet_series_with_bound(seq: WeightedSequence, N: int, tol: float = 1e-15) -> Valued:
    if seq.is_finite:
        terms = [seq.weight(n) / seq.zero(n) ** N for n in seq.indices()]
        val = fsum_complex(terms)
        return Valued(_real_if_possible(val), 4 * EPS * sum(abs(t) for t in terms))
    t = seq.tail
    assert t is not None
    p = _tail_exponent(t, N)
    if p <= 1:
        raise DivergentAtOrder(f"the series diverges at order {N}")
    if t.exact:
        val = (t.sign * t.scale) ** (-N) * hurwitz_zeta(p, seq.offset(seq.base))
        return Valued(val, 8 * EPS * abs(val))
    # generic: direct summation until the majorant tail drops below tol
    start = seq.base
    stop = start + 64
    while t.scale ** (-N) * hurwitz_zeta(p, seq.offset(stop)) > tol:
        stop = 2 * stop
        if stop > MAX_DIRECT:
            raise ToleranceUnreachable("Dirichlet series converges too slowly for tol")
    terms = [seq.weight(n) / seq.zero(n) ** N for n in range(start, stop)]
    bound = t.scale ** (-N) * hurwitz_zeta(p, seq.offset(stop))
    return Valued(_real_if_possible(fsum_complex(terms)), bound + 4 * EPS * sum(abs(x) for x in terms))


def dirichlet_series(seq: WeightedSequence, N: int, tol: float = 1e-15) -> complex | float:
    """zeta_{x,a}(N) = sum_n a_n / x_n^N."""
    return dirichlet_series_with_bound(seq, N, tol).value


# ---------------------------------------------------------------------------
# zeta generating function
# ---------------------------------------------------------------------------

def _pole_check(xn: complex, z: complex) -> None:
    if abs(xn - z) < 1e-10 * abs(xn):
        raise OnPole(f"z = {z} sits on the zero {xn}")


def zeta_generating_fn_with_bound(seq: WeightedSequence, z: complex | float, tol: float = 1e-16) -> Valued:
    if z == 0:
        return Valued(0.0, 0.0)
    if seq.is_finite:
        terms = []
        for n in seq.indices():
            xn = seq.zero(n)
            _pole_check(xn, z)
            terms.append(seq.weight(n) * z / (xn - z))
        return Valued(_real_if_possible(fsum_complex(terms)), 4 * EPS * sum(abs(t) for t in terms))
    t = seq.tail
    assert t is not None
    if t.growth + t.decay <= 1:
        raise DivergentAtOrder("the generating function needs growth + decay > 1")
    az = abs(z)
    # first index whose zero is at least twice as large as |z|
    j0 = max(seq.base, math.ceil((2 * az / t.scale) ** (1 / t.growth) - t.shift))
    if j0 > MAX_DIRECT:
        raise ToleranceUnreachable("|z| too large for direct evaluation")
    head = []
    for n in range(seq.base, j0):
        xn = seq.zero(n)
        _pole_check(xn, z)
        head.append(seq.weight(n) * z / (xn - z))
    rounding = 4 * EPS * sum(abs(h) for h in head)
    if t.exact:
        # z/(x_n - z) = sum_{q>=1} (z/x_n)^q, |z/x_n| <= 1/2 beyond j0
        ell = seq.offset(j0)
        ratio = z / (t.sign * t.scale * ell ** t.growth)
        wl = ell ** -t.decay
        tail = []
        omitted = 0.0
        zq = 1.0
        for q in range(1, MAX_GEOM):
            zq = zq * ratio
            term = zq * wl * hurwitz_zeta_scaled(_tail_exponent(t, q), ell)
            tail.append(term)
            omitted = abs(term)
            if omitted <= tol * max(1.0, abs(fsum_complex(head + tail))):
                break
        else:
            raise ToleranceUnreachable("geometric tail did not converge")
        total = fsum_complex(head + tail)
        return Valued(_real_if_possible(total), omitted + rounding + 4 * EPS * abs(total))
    # generic tail: bound |a_n z/(x_n - z)| <= 2|z| |a_n|/|x_n|, summed to tol
    stop = max(j0, seq.base) + 64
    while 2 * az / t.scale * hurwitz_zeta(t.growth + t.decay, seq.offset(stop)) > tol:
        stop *= 2
        if stop > MAX_DIRECT:
            raise ToleranceUnreachable("generating function converges too slowly for tol")
    for n in range(j0, stop):
        head.append(seq.weight(n) * z / (seq.zero(n) - z))
    bound = 2 * az / t.scale * hurwitz_zeta(t.growth + t.decay, seq.offset(stop))
    return Valued(_real_if_possible(fsum_complex(head)), bound + 4 * EPS * sum(abs(h) for h in head))


def zeta_generating_fn(seq: WeightedSequence, z: complex | float, tol: float = 1e-16) -> complex | float:
    """psi_{x,a}(z) = sum_n a_n z / (x_n - z)."""
    return zeta_generating_fn_with_bound(seq, z, tol).value


# ---------------------------------------------------------------------------
# large-argument expansion of power-law generating functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionTerm:
    """coef * Z^power * (log Z)^log_order."""

    power: float
    coef: float
    log_order: int = 0


def counter_expansion(t: TailClass, base: int, z_min: float, tol: float = 1e-18) -> tuple[list[ExpansionTerm], float]:
    """Large-Z expansion of G(Z) = sum_{n>=base} a_n / (1 + scale*(n+shift)^growth / Z).

    psi(z) = -G(|z|) when z has the opposite sign to the zeros.  The terms
    come from the poles of the Mellin transform: one at s = (1-d)/e from the
    zeta factor and one at every s = -m from pi/sin(pi s); a coincidence of
    the two produces a log term.  The series is asymptotic, so it is cut at
    its smallest term for Z = z_min; the returned estimate is that term.
    """
    if not t.exact:
        raise InvalidParams("the expansion needs an exact power-law sequence")
    e, d, c = t.growth, t.decay, t.scale
    h = base + t.shift
    s_star = (1 - d) / e
    terms: list[ExpansionTerm] = []
    collide = s_star <= 0 and abs(s_star - round(s_star)) < 1e-12
    m0 = -round(s_star) if collide else -1
    lead = 0.0
    if not collide:
        coef = math.pi / (e * math.sin(math.pi * s_star)) * c ** (-s_star)
        terms.append(ExpansionTerm(s_star, coef))
        lead = abs(coef) * z_min ** s_star
    # B_{em+1}(h) = 0 for h in {1/2, 1}: the power series stops after m = 0
    vanishing = d == 0.0 and float(e).is_integer() and int(e) % 2 == 0 and h in (0.5, 1.0)
    last = math.inf
    for m in range(0, 400):
        added = len(terms)
        sgn = -1.0 if m % 2 else 1.0
        if m == m0:
            # (-1)^m (Z/c)^-m [log(Z/c)/e + gamma0(h)]
            cm = sgn * c ** m
            terms.append(ExpansionTerm(-m, cm / e, 1))
            terms.append(ExpansionTerm(-m, cm * (stieltjes_gamma0(h) - math.log(c) / e)))
            size = abs(cm) * z_min ** (-m) * (1 + abs(math.log(z_min / c)))
        else:
            coef = sgn * c ** m * zeta_real(d - e * m, h)
            size = abs(coef) * z_min ** (-m)
            if coef != 0.0:
                terms.append(ExpansionTerm(-m, coef))
        lead = max(lead, size)
        if m >= 1 and vanishing:
            return terms[:added], 0.0
        if m >= 2 and size > last:
            return terms[:added], last  # the series has turned; drop the growing term
        if m >= 1 and 0.0 < size <= tol * lead:
            return terms, size
        if size != 0.0:
            last = size
    raise ToleranceUnreachable("large-argument expansion did not settle")


def _x_min(e: float) -> float:
    # exponentially small remainder ~ exp(-2 pi X sin(pi/e)) with X = (Z/c)^(1/e)
    return 7.0 / math.sin(math.pi / max(e, 2.0))


def _outer_weighted_sum(outer: WeightedSequence, inner: WeightedSequence, N: int, tol: float) -> Valued:
    """sum_n w_n psi_inner(z_n) / z_n^(N+1) over the outer sequence."""
    if outer.is_finite:
        terms: list[complex] = []
        bound = 0.0
        for n in outer.indices():
            zn = outer.zero(n)
            g = zeta_generating_fn_with_bound(inner, zn, tol)
            w = outer.weight(n) / zn ** (N + 1)
            terms.append(w * g.value)
            bound += abs(w) * g.bound
        val = fsum_complex(terms)
        return Valued(_real_if_possible(val), bound + 4 * EPS * sum(abs(x) for x in terms))
    to = outer.tail
    assert to is not None
    if inner.is_finite:
        return _outer_sum_finite_inner(outer, inner, N, tol)
    ti = inner.tail
    assert ti is not None
    if not (to.exact and ti.exact and to.sign == -ti.sign):
        raise InvalidParams("outer tails need exact power laws with opposite signs")
    # head: until the scaled argument of the inner expansion is large enough
    x_min = _x_min(ti.growth)
    n_out = outer.base
    while (to.scale * outer.offset(n_out) ** to.growth / ti.scale) ** (1 / ti.growth) < x_min:
        n_out += 1
        if n_out > 200_000:
            raise ToleranceUnreachable("outer head too long")
    head: list[float] = []
    bound = 0.0
    for n in range(outer.base, n_out):
        zn = outer.zero(n)
        g = zeta_generating_fn_with_bound(inner, zn, 1e-17)
        w = outer.weight(n) / zn ** (N + 1)
        head.append(w * g.value)
        bound += abs(w) * g.bound
    # tail: psi_inner(z_n) = -G(Z_n), Z_n = scale_o*(n+shift_o)^growth_o
    z_min = to.scale * outer.offset(n_out) ** to.growth
    expansion, trunc = counter_expansion(ti, inner.base, z_min)
    pref = -((to.sign * to.scale) ** (-(N + 1)))
    h0 = outer.offset(n_out)
    tail: list[float] = []
    for term in expansion:
        # Z^t = scale^t (n+shift)^(growth t); log Z = log scale + growth log(n+shift)
        expo = to.decay + to.growth * (N + 1) - to.growth * term.power
        if expo <= 1:
            raise DivergentAtOrder("outer tail diverges")
        base_val = term.coef * to.scale ** term.power
        if term.log_order == 0:
            tail.append(pref * base_val * hurwitz_zeta(expo, h0))
        else:
            zlog = math.log(to.scale) * hurwitz_zeta(expo, h0) - to.growth * hurwitz_zeta_sderiv(expo, h0)
            tail.append(pref * base_val * zlog)
    weight_sum = abs(pref) * hurwitz_zeta(to.decay + to.growth * (N + 1), h0)
    total = fsum_complex(head + tail)
    bound += trunc * weight_sum + 8 * EPS * (sum(abs(x) for x in head) + sum(abs(x) for x in tail))
    return Valued(_real_if_possible(total), bound)


def _outer_sum_finite_inner(outer: WeightedSequence, inner: WeightedSequence, N: int, tol: float) -> Valued:
    """Outer tail via psi(z) = -sum_{q>=0} mu_q z^-q, mu_q = sum_j b_j x_j^q (|z| > 2 max|x_j|)."""
    to = outer.tail
    assert to is not None and inner.support is not None
    xs = [inner.zero(j) for j in inner.indices()]
    bs = [inner.weight(j) for j in inner.indices()]
    rmax = max(abs(x) for x in xs)
    n_out = outer.base
    while to.scale * outer.offset(n_out) ** to.growth < 2 * rmax:
        n_out += 1
        if n_out > MAX_DIRECT:
            raise ToleranceUnreachable("outer head too long")
    head: list[complex] = []
    bound = 0.0
    for n in range(outer.base, n_out):
        zn = outer.zero(n)
        g = zeta_generating_fn_with_bound(inner, zn, tol)
        w = outer.weight(n) / zn ** (N + 1)
        head.append(w * g.value)
        bound += abs(w) * g.bound
    tail: list[complex] = []
    omitted = 0.0
    for q in range(0, MAX_GEOM):
        mu = fsum_complex(b * x ** q for b, x in zip(bs, xs))
        if to.exact:
            val = (to.sign * to.scale) ** (-(N + 1 + q)) * hurwitz_zeta(
                _tail_exponent(to, N + 1 + q), outer.offset(n_out))
        else:
            full = dirichlet_series_with_bound(outer, N + 1 + q, tol * 1e-3)
            val = full.value - fsum_complex(outer.weight(n) / outer.zero(n) ** (N + 1 + q)
                                            for n in range(outer.base, n_out))
            bound += full.bound
        term = -mu * val
        tail.append(term)
        omitted = abs(term)
        if omitted <= tol * max(1.0, abs(fsum_complex(head + tail))) or mu == 0:
            if q > 0:
                break
    total = fsum_complex(head + tail)
    return Valued(_real_if_possible(total), bound + omitted + 8 * EPS * sum(abs(x) for x in head + tail))


# ---------------------------------------------------------------------------
# convolutions and the two-term identity
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int, max_part: int):
    for combo in itertools.product(range(1, max_part + 1), repeat=parts):
        if sum(combo) == total:
            yield combo


def convolve_with_bound(inst: ConvolutionInstance, tol: float = 1e-15) -> Valued:
    N = inst.order
    terms: list[complex] = []
    bound = 0.0
    for j in range(1, N + 1):
        ly = dirichlet_series_with_bound(inst.left, j, tol)
        rx = dirichlet_series_with_bound(inst.right, N + 1 - j, tol)
        terms.append(ly.value * rx.value)
        bound += abs(ly.value) * rx.bound + abs(rx.value) * ly.bound
    val = fsum_complex(terms)
    return Valued(_real_if_possible(val), bound + 4 * EPS * sum(abs(t) for t in terms))


def convolve(inst: ConvolutionInstance, tol: float = 1e-15) -> complex | float:
    """(zeta_{y,b} * zeta_{x,a})(N+1) = sum_{j=1}^N zeta_{y,b}(j) zeta_{x,a}(N+1-j)."""
    return convolve_with_bound(inst, tol).value


def convolve_multi(seqs: Sequence[WeightedSequence], N: int, tol: float = 1e-15) -> complex | float:
    """n-fold convolution at N+1 for 2 <= n <= 3: sum over k_i >= 1 with sum k_i = N+1."""
    if not 2 <= len(seqs) <= 3:
        raise InvalidParams("n-fold convolution is implemented for n = 2 and n = 3")
    cache = {(i, q): dirichlet_series(s, q, tol) for i, s in enumerate(seqs) for q in range(1, N + 1)}
    terms = []
    for combo in _compositions(N + 1, len(seqs), N):
        prod = 1.0
        for i, q in enumerate(combo):
            prod = prod * cache[(i, q)]
        terms.append(prod)
    return _real_if_possible(fsum_complex(terms))


def two_term_parts(inst: ConvolutionInstance, tol: float = 1e-16) -> tuple[Valued, Valued]:
    """(sum_n a_n psi_y(x_n)/x_n^(N+1), sum_n b_n psi_x(y_n)/y_n^(N+1)) separately."""
    ax = _outer_weighted_sum(inst.right, inst.left, inst.order, tol)
    by = _outer_weighted_sum(inst.left, inst.right, inst.order, tol)
    return ax, by


def two_term_rhs(inst: ConvolutionInstance, tol: float = 1e-16) -> Valued:
    """sum_n a_n psi_y(x_n)/x_n^(N+1) + sum_n b_n psi_x(y_n)/y_n^(N+1)."""
    ax, by = two_term_parts(inst, tol)
    return Valued(_real_if_possible(ax.value + by.value), ax.bound + by.bound + 4 * EPS * (abs(ax.value) + abs(by.value)))


def verify_two_term(inst: ConvolutionInstance, tol: float = 1e-8) -> IdentityReport:
    lhs = convolve_with_bound(inst)
    rhs = two_term_rhs(inst)
    case = IdentityCase("two_term", {"N": inst.order, "left": inst.left.label, "right": inst.right.label})
    return make_report(case, lhs.value, rhs.value, lhs.bound + rhs.bound, None, tol)


def verify_multi(seqs: Sequence[WeightedSequence], N: int, tol: float = 1e-10) -> IdentityReport:
    """n-fold identity  *_i zeta_i (N+1) = sum_i zeta_{x_i, a_i . prod_{k != i} psi_k}(N+1).

    The right side is summed term by term, so every sequence must have
    finite support.
    """
    if not all(s.is_finite for s in seqs):
        raise InvalidParams("the n-fold right side needs finite-support sequences")
    lhs = convolve_multi(seqs, N)
    terms = []
    for i, s in enumerate(seqs):
        for n in s.indices():
            xn = s.zero(n)
            w = s.weight(n) / xn ** (N + 1)
            for j, other in enumerate(seqs):
                if j != i:
                    w = w * zeta_generating_fn(other, xn)
            terms.append(w)
    rhs = _real_if_possible(fsum_complex(terms))
    case = IdentityCase(f"{len(seqs)}_fold", {"N": N})
    scale = 4 * EPS * sum(abs(t) for t in terms)
    return make_report(case, lhs, rhs, scale, None, tol)

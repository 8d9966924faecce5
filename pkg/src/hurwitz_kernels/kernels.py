"""Hurwitz kernel Psi(x, a; k) and odd Hurwitz kernel Phi(x, a; k).

Series forms (X = alpha * x / pi)::

    Psi(X) = (2a-1)/(2 pi X) - C_k + (1/pi) sum_{n>=0} X^(2k-1) / (X^2k + (n+a)^2k)
    Phi(X) = (log X + gamma0(a))/pi - (X^2k/pi) sum_{n>=0} 1 / ((n+a)((n+a)^2k + X^2k))

with C_k = 1/(2k cos(pi(k-1)/2k)) = 1/(2k sin(pi/2k)).  The first N0 terms are
summed directly; the rest are expanded geometrically in (X/(n+a))^2k, which
turns the tail into an alternating series of Hurwitz zeta values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidParams, ToleranceUnreachable
from .special_functions import (
    bernoulli_polynomial_real,
    digamma,
    fsum_complex,
    hurwitz_zeta,
    hurwitz_zeta_scaled,
    hurwitz_zeta_sderiv,
    stieltjes_gamma0,
)

EPS = 2.0 ** -52
MAX_HEAD_TERMS = 10_000_000
MAX_GEOM_TERMS = 400


@dataclass(frozen=True)
class KernelParams:
    x: float
    a: float
    k: int
    alpha: float = math.pi

    def __post_init__(self) -> None:
        for name in ("x", "a", "alpha"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidParams(f"{name} must be a positive finite real, got {v!r}")
        if not (isinstance(self.k, int) and self.k >= 1):
            raise InvalidParams(f"k must be ≥ 1, got {self.k!r}")

    @property
    def x_scaled(self) -> float:
        """The unscaled argument alpha*x/pi (returned unchanged when alpha is pi)."""
        if self.alpha == math.pi:
            return float(self.x)
        return self.alpha * self.x / math.pi


@dataclass(frozen=True)
class TailPlan:
    head_terms: int
    geom_terms: int
    bound: float


@dataclass(frozen=True)
class KernelValue:
    value: float
    bound: float  # truncation plus a rounding estimate
    plan: TailPlan


def cos_constant(k: int) -> float:
    """C_k = 1/(2k cos(pi(k-1)/(2k))); the angle identity gives 1/(2k sin(pi/2k))."""
    return 1.0 / (2 * k * math.sin(math.pi / (2 * k)))


def head_length(x_scaled: float) -> int:
    return max(16, math.ceil(2 * x_scaled) + 16)


def _geometric_tail(x_scaled: float, a: float, k: int, n0: int, extra: int, tol: float) -> tuple[float, int, float]:
    """sum_{j>=0} (-1)^j X^(2k(j+1)-1+extra) zeta(2k(j+1)+extra, N0+a), alternating.

    Returns (value, terms used, first omitted term).  extra=0 gives the Psi
    tail, extra=1 the Phi tail.
    """
    ell = n0 + a
    if not x_scaled / ell < 0.5:
        raise ToleranceUnreachable("geometric tail needs X/(N0+a) < 1/2")
    u = x_scaled / ell
    terms: list[float] = []
    for j in range(MAX_GEOM_TERMS):
        s = 2 * k * (j + 1) + extra
        # X^(s-1) zeta(s, l) = (X/l)^(s-1) * l^s zeta(s, l) / l, free of overflow
        t = u ** (s - 1) * hurwitz_zeta_scaled(float(s), ell) / ell
        if abs(t) < tol or t == 0.0:
            return math.fsum(terms), j, abs(t)
        terms.append(-t if j % 2 else t)
    raise ToleranceUnreachable(f"geometric tail did not reach tol={tol:g} in {MAX_GEOM_TERMS} terms")


def psi_kernel_eval(p: KernelParams, tol: float = 1e-15) -> KernelValue:
    """Psi(alpha*x/pi, a; k) with head/tail split and error estimate."""
    if not tol >= 1e-16:
        raise InvalidParams("tol must be >= 1e-16")
    x, a, k = p.x_scaled, float(p.a), p.k
    n0 = head_length(x)
    if n0 > MAX_HEAD_TERMS:
        raise ToleranceUnreachable(f"X = {x:g} needs more than {MAX_HEAD_TERMS} head terms")
    terms: list[float] = []
    for n in range(n0):
        t = n + a
        if t > x:
            u = x / t
            terms.append(u ** (2 * k - 1) / (t * (1.0 + u ** (2 * k))))
        else:
            u = t / x
            terms.append(1.0 / (x * (1.0 + u ** (2 * k))))
    head = math.fsum(terms)
    tail, j, omitted = _geometric_tail(x, a, k, n0, 0, tol * math.pi)
    c = cos_constant(k)
    lead = (2 * a - 1) / (2 * math.pi * x)
    series = (head + tail) / math.pi
    value = math.fsum([lead, -c, series])
    rounding = 4 * EPS * (abs(lead) + c + abs(series))
    bound = omitted / math.pi + rounding
    plan = TailPlan(n0, j, omitted / math.pi)
    if is_symmetric_shift(a):
        # the exponential form keeps relative precision where the series only has absolute
        exact, mass = _symmetric_terms(x, a, k)
        if abs(exact - value) > 2 * bound + 8 * EPS * mass:
            raise ArithmeticError(f"series and exponential forms disagree at X={x!r}, a={a!r}, k={k}")
        return KernelValue(exact, 8 * EPS * mass, plan)
    return KernelValue(value, bound, plan)


def phi_kernel_eval(p: KernelParams, tol: float = 1e-15) -> KernelValue:
    """Phi(alpha*x/pi, a; k) with head/tail split and error estimate."""
    if not tol >= 1e-16:
        raise InvalidParams("tol must be >= 1e-16")
    x, a, k = p.x_scaled, float(p.a), p.k
    n0 = head_length(x)
    if n0 > MAX_HEAD_TERMS:
        raise ToleranceUnreachable(f"X = {x:g} needs more than {MAX_HEAD_TERMS} head terms")
    terms: list[float] = []
    for n in range(n0):
        t = n + a
        if t > x:
            u = x / t
            terms.append(u ** (2 * k) / (t * (1.0 + u ** (2 * k))))
        else:
            u = t / x
            terms.append(1.0 / (t * (1.0 + u ** (2 * k))))
    head = math.fsum(terms)
    tail, j, omitted = _geometric_tail(x, a, k, n0, 1, tol * math.pi)
    lead = (math.log(x) + stieltjes_gamma0(a)) / math.pi
    series = (head + tail) / math.pi
    value = lead - series
    rounding = 4 * EPS * (abs(math.log(x)) / math.pi + abs(lead) + abs(series))
    bound = omitted / math.pi + rounding
    return KernelValue(value, bound, TailPlan(n0, j, omitted / math.pi))


def psi_kernel(p: KernelParams, tol: float = 1e-15) -> float:
    """Hurwitz kernel Psi_alpha(x, a; k) from its partial-fraction series."""
    return psi_kernel_eval(p, tol).value


def phi_kernel(p: KernelParams, tol: float = 1e-15) -> float:
    """Odd Hurwitz kernel Phi_alpha(x, a; k) from its partial-fraction series."""
    return phi_kernel_eval(p, tol).value


# ---------------------------------------------------------------------------
# closed forms used as oracles
# ---------------------------------------------------------------------------

def ramanujan_kernel_closed(x: float) -> float:
    """1/(e^(2 pi x) - 1)."""
    if not x > 0:
        raise InvalidParams(f"x must be > 0, got {x!r}")
    return 1.0 / math.expm1(2 * math.pi * x)


def phi_closed_k1(x: float) -> float:
    """(log x - (psi(ix) + psi(-ix))/2)/pi, the k = a = 1 odd kernel."""
    if not x > 0:
        raise InvalidParams(f"x must be > 0, got {x!r}")
    pair = digamma(complex(0.0, x)) + digamma(complex(0.0, -x))
    if abs(pair.imag) > 1e-12 * max(1.0, abs(pair.real)):
        raise ArithmeticError(f"imaginary parts failed to cancel: {pair.imag:g}")
    return (math.log(x) - 0.5 * pair.real) / math.pi


@lru_cache(maxsize=64)
def _roots(k: int) -> tuple[complex, ...]:
    """The 2k roots of w^2k = -1."""
    return tuple(cmath.exp(1j * math.pi * (2 * j + 1) / (2 * k)) for j in range(2 * k))


def psi_kernel_digamma(x_scaled: float, a: float, k: int) -> float:
    """Psi(X, a; k) through digamma values at a - X w, w^2k = -1."""
    acc = fsum_complex(w * digamma(a - x_scaled * w) for w in _roots(k))
    return (2 * a - 1) / (2 * math.pi * x_scaled) - cos_constant(k) + acc.real / (2 * k * math.pi)


def phi_kernel_digamma(x_scaled: float, a: float, k: int) -> float:
    """Phi(X, a; k) through digamma values at a - X w, w^2k = -1."""
    acc = fsum_complex(digamma(a - x_scaled * w) for w in _roots(k))
    return (math.log(x_scaled) - acc.real / (2 * k)) / math.pi


def is_symmetric_shift(a: float) -> bool:
    return a == 0.5 or a == 1.0


def _symmetric_terms(x_scaled: float, a: float, k: int) -> tuple[float, float]:
    eps = 1.0 if a == 1.0 else -1.0
    acc: list[complex] = []
    for w in _roots(k):
        if w.imag < 0:
            q = eps * cmath.exp(-2j * math.pi * x_scaled * w)
            acc.append(w * q / (1 - q))
    return (1j * fsum_complex(acc) / k).real, sum(abs(t) for t in acc) / k


def psi_kernel_symmetric(x_scaled: float, a: float, k: int) -> float:
    """Exact exponential form of Psi(X, a; k) for a in {1/2, 1}.

    Poisson summation of the even summand gives, with q_w = exp(-2 pi i X w)
    over the roots w of w^2k = -1 in the lower half plane and e = cos(2 pi a),

        Psi(X, a; k) = Re[(i/k) sum_w w e q_w / (1 - e q_w)].

    Every term is computed to full relative precision, so exponentially small
    values keep their significant digits (unlike the series route, whose
    error is absolute).  For k = a = 1 this is 1/(e^(2 pi X) - 1).
    """
    if not is_symmetric_shift(a):
        raise InvalidParams("the exponential form needs a = 1/2 or a = 1")
    return _symmetric_terms(x_scaled, a, k)[0]


# ---------------------------------------------------------------------------
# large-X expansions and power-weighted sums
# ---------------------------------------------------------------------------

def psi_asymptotic_coeff(a: float, k: int, p: int) -> tuple[int, float]:
    """(q, c) with Psi(X) ~ sum_p c X^-q, q = 2kp+1."""
    q = 2 * k * p + 1
    c = (-1) ** (p + 1) * bernoulli_polynomial_real(q, a) / (math.pi * q)
    return q, c


def phi_asymptotic_coeff(a: float, k: int, p: int) -> tuple[int, float]:
    """(q, d) with Phi(X) ~ sum_p d X^-q, q = 2kp."""
    q = 2 * k * p
    d = (-1) ** p * bernoulli_polynomial_real(q, a) / (math.pi * q)
    return q, d


@dataclass(frozen=True)
class SumResult:
    value: float
    bound: float
    head_terms: int


def _exp_decay_rate(k: int) -> float:
    # the slowest exponentially small contribution behaves like exp(-rate*X)
    return 2 * math.pi * math.sin(math.pi / (2 * k))


def _exp_remainder(decay: float, ell: float, power: int) -> float:
    """Bound on sum_{t >= ell, step 1} t^power * 4 exp(-decay t), or inf if not yet geometric."""
    ratio = math.exp(-decay) * ((ell + 1) / ell) ** max(power, 0)
    if ratio >= 0.9:
        return math.inf
    return 4 * math.exp(-decay * ell + power * math.log(ell)) / (1 - ratio)


def kernel_power_sum(kind: str, a: float, k: int, r: float, shift: float, power: int,
                     corrections: int = 0, tol: float = 1e-18) -> SumResult:
    """sum_{n>=0} (n+shift)^power * K~(r(n+shift)), K~ = K minus its first expansion terms.

    kind is "psi" or "phi"; K~ removes the first ``corrections`` terms of the
    large-X expansion of K.  Terms with n < N1 are summed directly; beyond N1
    the expansion of K is summed in closed form through Hurwitz zeta values,
    which leaves only exponentially small contributions behind.  N1 is the
    first index where those fall below tol or below the rounding error the
    head has already accumulated, whichever is larger.
    """
    if kind not in ("psi", "phi"):
        raise InvalidParams(f"kind must be 'psi' or 'phi', got {kind!r}")
    coeff = psi_asymptotic_coeff if kind == "psi" else phi_asymptotic_coeff
    exact_zero = kind == "psi" and is_symmetric_shift(a)  # odd Bernoulli values vanish
    if not exact_zero and coeff(a, k, corrections + 1)[0] - power <= 1:
        raise InvalidParams("the weighted sum diverges for this power")
    rate = _exp_decay_rate(k)

    use_exact = kind == "psi" and is_symmetric_shift(a) and power > 0
    head: list[float] = []
    rounding = 0.0
    n1 = 0
    while True:
        # stop once the exponentially small remainder is below tol or below the
        # rounding already committed (more head terms would only add noise)
        ell = n1 + shift
        if r * ell >= 6.5:
            rem = _exp_remainder(rate * r, ell, power)
            if rem < max(tol, 0.01 * rounding):
                break
        if n1 >= 100_000:
            raise ToleranceUnreachable("weighted kernel sum needs too many direct terms")
        t = n1 + shift
        x = r * t
        if use_exact:
            kv = psi_kernel_symmetric(x, a, k)
            kb = 4 * EPS * abs(kv)
        else:
            ev = (psi_kernel_eval if kind == "psi" else phi_kernel_eval)(KernelParams(x, a, k), 1e-16)
            kv, kb = ev.value, ev.bound
        parts = [kv]
        for pp in range(1, corrections + 1):
            q, c = coeff(a, k, pp)
            parts.append(-c * x ** (-q))
        scale = max(abs(v) for v in parts)
        weight = t ** power
        head.append(weight * math.fsum(parts))
        rounding += abs(weight) * (kb + 4 * EPS * scale)
        n1 += 1

    tail: list[float] = []
    last = 0.0
    prev = math.inf
    ell = n1 + shift
    for pp in range(corrections + 1, corrections + (1 if exact_zero else 400)):
        q, c = coeff(a, k, pp)
        if c == 0.0:
            continue
        # r^-q zeta(q - power, l) = (r l)^-q l^power * l^(q-power) zeta(q - power, l)
        t = c * math.exp(-q * math.log(r * ell) + power * math.log(ell)) * hurwitz_zeta_scaled(float(q - power), ell)
        mag = abs(t)
        if mag > prev:
            break  # asymptotic series turned; the remainder is exponentially small
        tail.append(t)
        last = mag
        prev = mag
        if mag <= tol * abs(math.fsum(tail)) or mag == 0.0:
            break
    total = math.fsum(head + tail)
    return SumResult(total, rounding + last + _exp_remainder(rate * r, ell, power), n1)


def zeta_power_log_sum(power: float, shift: float, start: int, log_scale: float = 0.0) -> float:
    """sum_{n>=start} (n+shift)^-power * (log_scale + log(n+shift))."""
    ell = start + shift
    return log_scale * hurwitz_zeta(float(power), ell) - hurwitz_zeta_sderiv(float(power), ell)

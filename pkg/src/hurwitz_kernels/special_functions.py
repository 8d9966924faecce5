"""Scalar building blocks: Bernoulli data, Hurwitz zeta, digamma.

Bernoulli numbers are exact (``fractions.Fraction``) and cached; everything
else is binary64.  Series are accumulated with ``math.fsum`` (correctly
rounded summation), applied separately to real and imaginary parts for
complex arguments.

The Hurwitz zeta function is evaluated by Euler-Maclaurin summation after an
index shift ``M``::

    zeta(s, a) = sum_{n<M} (n+a)^-s + L^(1-s)/(s-1) + L^-s/2
                 + sum_{j>=1} B_2j/(2j)! (s)_(2j-1) L^(-s-2j+1),   L = M + a

The correction series is asymptotic, so ``M`` is enlarged until the
correction terms decay quickly enough to meet the requested accuracy.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import InvalidParams, NonconvergentConfig, PoleAt1, PoleAtNonposInt

Number = Union[float, complex]

EULER_GAMMA = 0.5772156649015329

# Exact Bernoulli numbers B_0, B_1, ... with B_1 = -1/2 (so B_n = B_n(0)).
_BERNOULLI: list[Fraction] = [Fraction(1)]
_BERNOULLI_LOCK = threading.Lock()

# minimum M + a left of the critical line, where the head sum cancels
_LEFT_SHIFT = 5
_EPS = 2.0 ** -52


def fsum_complex(values: Iterable[Number]) -> complex:
    """Correctly rounded sum of complex numbers, component by component."""
    re: list[float] = []
    im: list[float] = []
    for v in values:
        re.append(v.real)
        im.append(v.imag)
    return complex(math.fsum(re), math.fsum(im))


def _check_finite(z: Number, name: str) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidParams(f"{name} must be finite, got {z!r}")


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials
# ---------------------------------------------------------------------------

def bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number B_n with the convention B_1 = -1/2.

    Computing B_n fills the cache for every index up to n.  Readers never
    take the lock; growth is serialized.
    """
    if n < 0:
        raise InvalidParams(f"Bernoulli index must be >= 0, got {n}")
    if n < len(_BERNOULLI):
        return _BERNOULLI[n]
    with _BERNOULLI_LOCK:
        while len(_BERNOULLI) <= n:
            m = len(_BERNOULLI)
            if m > 1 and m % 2 == 1:
                _BERNOULLI.append(Fraction(0))
                continue
            # sum_{j=0}^{m} C(m+1, j) B_j = 0
            acc = sum(math.comb(m + 1, j) * _BERNOULLI[j] for j in range(m))
            _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


def bernoulli_polynomial(n: int, x: Union[int, Fraction]) -> Fraction:
    """Exact B_n(x) = sum_j C(n, j) B_j x^(n-j) for rational x."""
    if n < 0:
        raise InvalidParams(f"Bernoulli index must be >= 0, got {n}")
    if isinstance(x, float):
        raise InvalidParams("exact Bernoulli polynomial needs an int or Fraction argument")
    x = Fraction(x)
    bernoulli_number(n)
    acc = Fraction(0)
    for j in range(n + 1):
        b = _BERNOULLI[j]
        if b:
            acc += math.comb(n, j) * b * x ** (n - j)
    return acc


@lru_cache(maxsize=4096)
def bernoulli_polynomial_real(n: int, x: float) -> float:
    """B_n(x) correctly rounded: exact rational evaluation at the binary64 value of x.

    Exactness matters at the symmetric points x = 1/2 and x = 1, where odd-index
    values vanish and a rounded Horner evaluation would leave ~1e-16 residue.
    """
    if n < 0:
        raise InvalidParams(f"Bernoulli index must be >= 0, got {n}")
    if not math.isfinite(x):
        raise InvalidParams(f"x must be finite, got {x!r}")
    return float(bernoulli_polynomial(n, Fraction(x)))


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZetaEvalConfig:
    """Euler-Maclaurin settings.

    em_terms is the number of correction terms always evaluated; more are
    added (up to max_em_terms) while they keep shrinking.  shift is the
    minimum of M + a.  The series stops once the first dropped term is below
    target_abs_err times the magnitude of the running value, so the target
    is met in absolute terms for |zeta| <= 1 and in relative terms above.
    """

    em_terms: int = 10
    shift: int = 16
    target_abs_err: float = 1e-17
    max_em_terms: int = 80
    max_shift: int = 1 << 20

    def __post_init__(self) -> None:
        if self.em_terms < 2:
            raise InvalidParams("em_terms must be >= 2")
        if self.shift < 8:
            raise InvalidParams("shift must be >= 8")
        if not self.target_abs_err > 0:
            raise InvalidParams("target_abs_err must be > 0")
        if self.max_em_terms < self.em_terms:
            raise InvalidParams("max_em_terms must be >= em_terms")


DEFAULT_ZETA = ZetaEvalConfig()


@lru_cache(maxsize=256)
def _em_coeff(j: int) -> float:
    """B_{2j}/(2j)! as a float."""
    return float(bernoulli_number(2 * j) / math.factorial(2 * j))


def _em_evaluate(s: Number, a: float, cfg: ZetaEvalConfig, derivative: bool) -> tuple[Number, float]:
    """Euler-Maclaurin value of zeta(s, a) or d/ds zeta(s, a), with error estimate."""
    is_complex = isinstance(s, complex)
    if is_complex:
        _check_finite(s, "s")
    if not (a > 0 and math.isfinite(a)):
        raise InvalidParams(f"a must be a positive finite real, got {a!r}")
    if abs(s - 1) < 1e-8:
        raise PoleAt1(f"zeta(s, a) has a pole at s = 1 (s = {s!r})")

    def power(base_log: float, base: float, expo: Number) -> Number:
        # base^expo; math.pow keeps real powers correctly rounded
        if is_complex:
            return cmath.exp(expo * base_log)
        return math.pow(base, expo)

    sigma = s.real
    if sigma <= 0 and not is_complex and float(s).is_integer() and not derivative:
        # the correction series terminates: no shift needed, and none wanted
        # because the head sum would cancel catastrophically
        m = 0
        finite_series = True
    else:
        finite_series = False
        base = cfg.shift if sigma >= 0.5 else _LEFT_SHIFT
        m = max(0, math.ceil(base - a), math.ceil(abs(s) / math.pi - a))
    while True:
        if m > cfg.max_shift:
            raise NonconvergentConfig(f"Euler-Maclaurin shift exceeded {cfg.max_shift} for s={s!r}, a={a!r}")
        ell = m + a
        log_l = math.log(ell)
        parts: list[Number] = []
        for n in range(m):
            t = n + a
            lt = math.log(t)
            v = power(lt, t, -s)
            parts.append(-lt * v if derivative else v)
        pw = power(log_l, ell, 1 - s)  # L^(1-s)
        if derivative:
            parts.append(-log_l * pw / (s - 1) - pw / ((s - 1) * (s - 1)))
            parts.append(-0.5 * log_l * pw / ell)
        else:
            parts.append(pw / (s - 1))
            parts.append(0.5 * pw / ell)
        head = fsum_complex(parts) if is_complex else math.fsum(parts)
        part_scale = max(abs(v) for v in parts)

        # correction terms: c_j * P_j(s) * L^(-s-2j+1), P_j = (s)_(2j-1)
        poch = s
        dpoch = 1.0
        lpow = pw / (ell * ell)  # L^(-s-1)
        inv_l2 = 1.0 / (ell * ell)
        corr: list[Number] = []
        prev_mag = math.inf
        err = math.inf
        converged = False
        scale = abs(head)
        terminated = False
        for j in range(1, cfg.max_em_terms + 2):
            c = _em_coeff(j)
            if derivative:
                term = c * (dpoch - log_l * poch) * lpow
            else:
                term = c * poch * lpow
            mag = abs(term)
            if j == 1:
                scale = max(scale, mag)
            if poch == 0 and (not derivative or dpoch == 0):
                terminated = True
            if terminated or (j > cfg.em_terms and (mag <= cfg.target_abs_err * max(scale, 1e-300) or mag == 0.0)):
                err = mag
                converged = True
                break
            if mag > prev_mag and j > 2 and not finite_series:
                # the asymptotic series turned; accept if its smallest term is already
                # below the rounding of the head, since a larger shift only adds rounding
                if prev_mag <= 4 * _EPS * part_scale:
                    err = prev_mag
                    converged = True
                break
            if j > cfg.max_em_terms:
                break
            corr.append(term)
            prev_mag = mag if mag > 0 else prev_mag
            # advance the Pochhammer symbol by two factors (product rule for d/ds)
            f1 = s + 2 * j - 1
            f2 = s + 2 * j
            dpoch = dpoch * f1 * f2 + poch * (f1 + f2)
            poch = poch * f1 * f2
            lpow = lpow * inv_l2
        if converged:
            if is_complex:
                return fsum_complex([head, fsum_complex(corr)]), err
            return math.fsum([head] + corr), err
        m = 2 * m + 8


# Left of this abscissa the Euler-Maclaurin head terms (M+a)^-s dwarf zeta(s, a)
# and the asymptotic corrections stop converging, so real s uses Hurwitz's formula.
HURWITZ_FORMULA_BELOW = -4.0


def _use_hurwitz_formula(s: Number) -> bool:
    return (not isinstance(s, complex)) and s <= HURWITZ_FORMULA_BELOW and not float(s).is_integer()


def _hurwitz_formula(s: float, a: float, cfg: ZetaEvalConfig) -> tuple[float, float]:
    """zeta(s, a) = 2 Gamma(t)/(2 pi)^t sum_{n>=1} cos(pi t/2 - 2 pi n a)/n^t, t = 1 - s > 1.

    The formula needs 0 < a <= 1; larger a is brought down with
    zeta(s, a) = zeta(s, a - J) - sum_{j<J} (a - J + j)^-s.
    """
    if not (a > 0 and math.isfinite(a)):
        raise InvalidParams(f"a must be a positive finite real, got {a!r}")
    t = 1.0 - s
    shift = max(0, math.ceil(a) - 1)
    a0 = a - shift
    # truncate where the crude tail bound N^(1-t)/(t-1) drops below the target
    n_max = math.ceil((cfg.target_abs_err * (t - 1)) ** (-1.0 / (t - 1)))
    if n_max > cfg.max_shift:
        raise NonconvergentConfig(f"Hurwitz formula needs {n_max} terms at s={s!r}")
    quarter = t / 4.0
    terms = []
    for n in range(1, n_max + 1):
        phase = (quarter - math.fmod(n * a0, 1.0)) % 1.0
        terms.append(math.cos(2 * math.pi * phase) * math.exp(-t * math.log(n)))
    pref = 2.0 * math.exp(math.lgamma(t) - t * math.log(2 * math.pi))
    value = pref * math.fsum(terms)
    err = pref * n_max ** (1 - t) / (t - 1)
    if shift:
        value = math.fsum([value] + [-math.pow(a0 + j, -s) for j in range(shift)])
    return value, err


def hurwitz_zeta(s: Number, a: float, cfg: ZetaEvalConfig = DEFAULT_ZETA) -> Number:
    """Hurwitz zeta function zeta(s, a) for a > 0 and any s != 1."""
    return hurwitz_zeta_with_error(s, a, cfg)[0]


def hurwitz_zeta_with_error(s: Number, a: float, cfg: ZetaEvalConfig = DEFAULT_ZETA) -> tuple[Number, float]:
    """zeta(s, a) together with the magnitude of the first dropped correction."""
    if _use_hurwitz_formula(s):
        return _hurwitz_formula(float(s), a, cfg)
    return _em_evaluate(s, a, cfg, derivative=False)


def hurwitz_zeta_sderiv(s: Number, a: float, cfg: ZetaEvalConfig = DEFAULT_ZETA) -> Number:
    """d/ds zeta(s, a), differentiating the Euler-Maclaurin expansion term by term."""
    return _em_evaluate(s, a, cfg, derivative=True)[0]


def hurwitz_zeta_scaled(s: float, a: float) -> float:
    """a^s * zeta(s, a) for real s > 1; lies in [1, 1 + a/(s-1)] and never under- or overflows.

    Every Euler-Maclaurin term carries the factor a^s, so it is folded into
    (1 + n/a)^-s before exponentiation.
    """
    if not (s > 1 and a > 0):
        raise InvalidParams("the scaled zeta needs s > 1 and a > 0")
    m = max(0, math.ceil(16 - a), math.ceil(s / math.pi - a))
    head = [math.exp(-s * math.log1p(n / a)) for n in range(m)]
    ell = m + a
    lead = math.exp(-s * math.log1p(m / a))
    corr = [ell / (s - 1), 0.5]
    poch = s
    lpow = 1.0 / ell
    for j in range(1, 60):
        t = _em_coeff(j) * poch * lpow
        corr.append(t)
        if abs(t) < 1e-18 * corr[0]:
            break
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        lpow /= ell * ell
    return math.fsum(head + [lead * math.fsum(corr)])


def hurwitz_zeta_neg_int(n: int, a: float) -> float:
    """zeta(-n, a) = -B_{n+1}(a)/(n+1) for integer n >= 0."""
    if n < 0:
        raise InvalidParams(f"n must be >= 0, got {n}")
    if not a > 0:
        raise InvalidParams(f"a must be > 0, got {a!r}")
    return -bernoulli_polynomial_real(n + 1, a) / (n + 1)


def zeta_real(s: float, a: float, cfg: ZetaEvalConfig = DEFAULT_ZETA) -> float:
    """Real zeta(s, a) using the Bernoulli route at non-positive integers."""
    if s <= 0 and float(s).is_integer():
        return hurwitz_zeta_neg_int(int(-s), a)
    return hurwitz_zeta(float(s), a, cfg)


def riemann_zeta(s: Number, cfg: ZetaEvalConfig = DEFAULT_ZETA) -> Number:
    """Riemann zeta function, zeta(s) = zeta(s, 1)."""
    return hurwitz_zeta(s, 1.0, cfg)


# ---------------------------------------------------------------------------
# Digamma
# ---------------------------------------------------------------------------

_DIGAMMA_ASYMPTOTIC = tuple(float(bernoulli_number(2 * j)) / (2 * j) for j in range(1, 9))


def digamma(z: Number) -> Number:
    """Digamma function psi(z) for real or complex z (principal branch of log).

    Upward recurrence psi(z) = psi(z+1) - 1/z moves the argument to
    Re(z) >= 12, where the asymptotic series with eight Bernoulli terms is
    accurate to well below binary64 rounding.
    """
    is_complex = isinstance(z, complex)
    _check_finite(z, "z")
    if z.real <= 0.5 and abs(z.imag) < 1e-10:
        nearest = round(z.real)
        if nearest <= 0 and abs(z.real - nearest) < 1e-10:
            raise PoleAtNonposInt(f"digamma has a pole at {nearest}")
    shifts: list[Number] = []
    w = z
    while w.real < 12.0:
        shifts.append(-1.0 / w)
        w = w + 1
    log = cmath.log if is_complex else math.log
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0.0 * inv
    pw = inv2
    for c in _DIGAMMA_ASYMPTOTIC:
        series = series + c * pw
        pw = pw * inv2
    parts = [log(w), -0.5 * inv, -series] + shifts
    if is_complex:
        return fsum_complex(parts)
    return math.fsum(parts)


def stieltjes_gamma0(a: float) -> float:
    """Constant term of the Laurent expansion of zeta(s, a) at s = 1, i.e. -psi(a)."""
    if not a > 0:
        raise InvalidParams(f"a must be > 0, got {a!r}")
    return -digamma(float(a))

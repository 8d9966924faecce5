"""Direct quadrature of the Mellin-Barnes line integrals defining Psi and Phi.

On the line s = c + it the integral (1/2 pi i) int f(s) ds becomes
(1/2 pi) int f(c + it) dt, which is approximated by the trapezoid rule on
[-T, T].  The integrand is analytic in a strip around the line and decays
like exp(-pi |t| / 2k), so the rule converges geometrically in the step; the
step is halved until two successive estimates agree.

zeta(1 - s, a) is evaluated here by a vectorised Euler-Maclaurin sum over all
nodes at once, independently of the series machinery in ``kernels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, QuadratureNotConverged, VariantUnresolved
from .identities import SEPARATION, VariantResolution
from .kernels import KernelParams, phi_kernel, psi_kernel
from .special_functions import bernoulli_number, fsum_complex

FAMILIES = ("cosine", "sine")
NORM_VARIANTS = ("factor_1", "factor_1_over_k")
EPS = 2.0 ** -52
_EM_TERMS = 14
_EM_COEFFS = tuple(float(bernoulli_number(2 * j) / math.factorial(2 * j)) for j in range(1, _EM_TERMS + 1))


@dataclass(frozen=True)
class LineIntegralSpec:
    c: float = 1.5
    T: float = 60.0
    step: float = 0.05
    kernel_family: str = "cosine"
    norm_variant: str = "factor_1_over_k"
    budget: float = 1e-9        # allowed change between step and step/2
    max_halvings: int = 4

    def __post_init__(self) -> None:
        if not self.c > 1:
            raise InvalidParams(f"c must be > 1, got {self.c!r}")
        if not self.T >= 10:
            raise InvalidParams(f"T must be >= 10, got {self.T!r}")
        if not 0 < self.step <= 0.25:
            raise InvalidParams(f"step must lie in (0, 0.25], got {self.step!r}")
        if self.kernel_family not in FAMILIES:
            raise InvalidParams(f"kernel_family must be one of {FAMILIES}")
        if self.norm_variant not in NORM_VARIANTS:
            raise InvalidParams(f"norm_variant must be one of {NORM_VARIANTS}")
        if not self.budget > 0 or self.max_halvings < 0:
            raise InvalidParams("budget must be > 0 and max_halvings >= 0")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float      # step-halving change + certified tail + rounding
    tail: float
    step: float       # finest step used
    nodes: int


def decay_bound(kernel_family: str, k: int, t: float) -> float:
    """4 exp(-pi |t| / 2k), bounding 1/|cos| or 1/|sin| on the line.

    Both trig factors have modulus >= sinh(pi |t| / 2k), and 1/sinh(v) <= 4 e^-v
    once v >= log(2)/2, i.e. for |t| >= 0.23 k; at |t| >= 1 this covers k <= 4.
    """
    if kernel_family not in FAMILIES:
        raise InvalidParams(f"kernel_family must be one of {FAMILIES}")
    if not (isinstance(k, int) and k >= 1):
        raise InvalidParams(f"k must be ≥ 1, got {k!r}")
    if not abs(t) >= 1:
        raise InvalidParams("decay_bound needs |t| >= 1")
    return 4.0 * math.exp(-math.pi * abs(t) / (2 * k))


def _reciprocal_trig_bound(k: int, t: float) -> float:
    v = math.pi * abs(t) / (2 * k)
    return max(4.0 * math.exp(-v), 1.0 / math.sinh(v))


def zeta_line_bound(sigma: float, t: float, a: float) -> float:
    """Triangle-inequality bound on |zeta(sigma + it, a)| from Euler-Maclaurin.

    Uses J correction terms with sigma + 2J > 0 and the standard bound
    |B~_n(u)| <= 4 n!/(2 pi)^n on the periodic Bernoulli function.
    """
    w = complex(sigma, t)
    big_m = math.ceil(abs(t)) + 1
    big_n = big_m + a
    total = sum((n + a) ** -sigma for n in range(big_m))
    total += big_n ** (1 - sigma) / abs(w - 1) + 0.5 * big_n ** -sigma
    J = max(1, math.ceil(-sigma / 2 + 0.5))
    poch = 1.0
    for j in range(1, J + 1):
        if j == 1:
            poch = abs(w)
        else:
            poch *= abs(w + 2 * j - 3) * abs(w + 2 * j - 2)
        total += abs(_EM_COEFFS[j - 1]) * poch * big_n ** (-sigma - 2 * j + 1)
    n = 2 * J + 1
    poch *= abs(w + 2 * J - 1)
    total += poch * 4 / (2 * math.pi) ** n * big_n ** (-sigma - 2 * J) / (sigma + 2 * J)
    return total


def _zeta_line(w: np.ndarray, a: float) -> np.ndarray:
    """zeta(w, a) for an array of complex w with Re w < 1 (vectorised Euler-Maclaurin)."""
    big_m = int(math.ceil(float(np.max(np.abs(w))))) + 16
    logs = np.log(np.arange(big_m, dtype=float) + a)
    head = np.exp(-np.outer(logs, w)).sum(axis=0)
    big_n = big_m + a
    log_n = math.log(big_n)
    base = np.exp(-w * log_n)                        # N^-w
    total = head + big_n * base / (w - 1) + 0.5 * base
    poch = w.copy()
    term_pow = base / big_n                          # N^(-w-1)
    for j, coeff in enumerate(_EM_COEFFS, start=1):
        if j > 1:
            poch = poch * (w + 2 * j - 3) * (w + 2 * j - 2)
            term_pow = term_pow / (big_n * big_n)
        total = total + coeff * poch * term_pow
    return total


def _trig_denominator(family: str, norm: str, k: int, s: np.ndarray) -> np.ndarray:
    scale = 2.0 if norm == "factor_1" else 2.0 * k
    if family == "cosine":
        return scale * np.cos(math.pi * (s + k - 1) / (2 * k))
    return scale * np.sin(math.pi * s / (2 * k))


def first_pole(family: str, k: int) -> float:
    """Real part of the first integrand pole to the right of s = 1."""
    return 1.0 + 2 * k if family == "cosine" else 2.0 * k


def _integrand(p: KernelParams, spec: LineIntegralSpec, t: np.ndarray) -> np.ndarray:
    s = spec.c + 1j * t
    zeta = _zeta_line(1 - s, p.a)
    return zeta * np.exp(-s * math.log(p.x_scaled)) / _trig_denominator(spec.kernel_family, spec.norm_variant, p.k, s)


def tail_bound(p: KernelParams, spec: LineIntegralSpec) -> float:
    """Bound on (1/2 pi) int_{|t| > T} |f(c + it)| dt from the decay and zeta bounds."""
    scale = 2.0 if spec.norm_variant == "factor_1" else 2.0 * p.k
    pref = p.x_scaled ** -spec.c / (2 * math.pi * scale)
    sigma = 1 - spec.c
    total, t = 0.0, spec.T
    # on [t, t+1]: |zeta| <= its bound at the right end (grows), trig bound at the left end (decays)
    while True:
        piece = zeta_line_bound(sigma, t + 1, p.a) * _reciprocal_trig_bound(p.k, t)
        total += piece
        t += 1
        if piece <= 1e-4 * total or piece < 1e-300:
            break
    # the remaining pieces shrink at least geometrically past this point
    ratio = math.exp(-math.pi / (2 * p.k)) * 1.5
    if ratio < 1:
        total += piece * ratio / (1 - ratio)
    else:
        total *= 2
    return 2 * pref * total


def _trapezoid(values: np.ndarray, step: float) -> complex:
    weighted = values.copy()
    weighted[0] *= 0.5
    weighted[-1] *= 0.5
    return fsum_complex(complex(v) for v in weighted) * step / (2 * math.pi)


def kernel_via_quadrature(p: KernelParams, spec: LineIntegralSpec = LineIntegralSpec()) -> QuadratureResult:
    if not spec.c < first_pole(spec.kernel_family, p.k):
        raise InvalidParams(f"c must lie below the pole at {first_pole(spec.kernel_family, p.k)}")
    if math.pi * spec.T / (2 * p.k) > 600:
        raise InvalidParams("T too large: trig factor overflows")
    intervals = max(2, round(2 * spec.T / spec.step))
    step = 2 * spec.T / intervals
    t = np.linspace(-spec.T, spec.T, intervals + 1)
    values = _integrand(p, spec, t)
    coarse = _trapezoid(values, step)
    abs_mass = float(np.abs(values).sum()) * step / (2 * math.pi)
    for _ in range(spec.max_halvings + 1):
        mids = _integrand(p, spec, t[:-1] + step / 2)
        fine = 0.5 * coarse + fsum_complex(complex(v) for v in mids) * step / (4 * math.pi)
        abs_mass = 0.5 * abs_mass + float(np.abs(mids).sum()) * step / (4 * math.pi)
        change = abs(fine - coarse)
        t = np.sort(np.concatenate((t, t[:-1] + step / 2)))
        step /= 2
        coarse = fine
        if change <= spec.budget:
            tail = tail_bound(p, spec)
            error = change + tail + 8 * EPS * abs_mass
            return QuadratureResult(fine, error, tail, step, len(t))
    raise QuadratureNotConverged(
        f"step halving still changes the integral by {change:.3g} > {spec.budget:.3g} at step {step:.3g}")


def choose_height(kernel_family: str, p: KernelParams, tol: float, c: float = 1.5,
                  norm_variant: str = "factor_1_over_k") -> float:
    """Smallest T in steps of 5 (T >= 10) whose certified tail is below tol."""
    T = 10.0
    while True:
        spec = LineIntegralSpec(c=c, T=T, kernel_family=kernel_family, norm_variant=norm_variant)
        if tail_bound(p, spec) <= tol:
            return T
        T += 5.0
        if math.pi * T / (2 * p.k) > 600:
            raise InvalidParams(f"no admissible height reaches tail {tol:.3g}")


def auto_spec(kernel_family: str, p: KernelParams, tol: float = 1e-8, norm_variant: str = "factor_1_over_k",
              step: float = 0.1) -> LineIntegralSpec:
    c = 1.5 if first_pole(kernel_family, p.k) > 1.75 else 1.25
    T = choose_height(kernel_family, p, tol, c, norm_variant)
    return LineIntegralSpec(c=c, T=T, step=step, kernel_family=kernel_family, norm_variant=norm_variant,
                            budget=tol)


@dataclass(frozen=True)
class CrossCheck:
    series: float
    quadrature: complex
    quadrature_error: float

    @property
    def difference(self) -> float:
        return abs(self.quadrature - self.series)


def cross_check(kind: str, p: KernelParams, tol: float = 1e-8, norm_variant: str = "factor_1_over_k") -> CrossCheck:
    if kind not in ("psi", "phi"):
        raise InvalidParams(f"kind must be 'psi' or 'phi', got {kind!r}")
    family = "cosine" if kind == "psi" else "sine"
    series = psi_kernel(p) if kind == "psi" else phi_kernel(p)
    q = kernel_via_quadrature(p, auto_spec(family, p, tol, norm_variant))
    return CrossCheck(series, q.value, q.error)


# (x, a, k) triples; k >= 2 only, since both normalizations coincide at k = 1
NORMALIZATION_GRID: tuple[tuple[float, float, int], ...] = (
    (1.0, 1.0, 2), (0.5, 0.5, 2), (2.0, 1 / 3, 2), (1.0, 0.75, 3),
)
NORMALIZATION_READINGS = {
    "factor_1_over_k": "Mellin denominator 2k sin(pi s/2k)",
    "factor_1": "Mellin denominator 2 sin(pi s/2k)",
}


def resolve_phi_normalization(grid: tuple[tuple[float, float, int], ...] = NORMALIZATION_GRID,
                              tol: float = 1e-6) -> VariantResolution:
    """Pick the Mellin-side factor for Phi by matching quadrature against the series form."""
    residuals: dict[str, list[float]] = {v: [] for v in NORM_VARIANTS}
    for x, a, k in grid:
        p = KernelParams(x, a, k)
        series = phi_kernel(p)
        for variant in NORM_VARIANTS:
            q = kernel_via_quadrature(p, auto_spec("sine", p, 1e-10, variant))
            residuals[variant].append(abs(q.value - series) / max(abs(series), 1.0))
    frozen = {v: tuple(r) for v, r in residuals.items()}
    winners = [v for v in NORM_VARIANTS if max(frozen[v]) <= tol]
    if len(winners) != 1:
        raise VariantUnresolved(f"phi_normalization: {len(winners)} variants fit")
    win = winners[0]
    worst = max(frozen[win])
    losers = min(min(r) for v, r in frozen.items() if v != win)
    separation = losers / worst if worst > 0 else math.inf
    if not separation >= SEPARATION:
        raise VariantUnresolved(f"phi_normalization: separation only {separation:.3g}")
    cases = tuple({"x": x, "a": a, "k": k} for x, a, k in grid)
    note = f"{NORMALIZATION_READINGS[win]}; max residual {worst:.2e}, other reading >= {losers:.2e}"
    return VariantResolution("phi_normalization", win, note,
                             "Mellin-side prefactor of the odd Hurwitz kernel: 1/2 or 1/(2k)",
                             frozen, cases, separation, dict(NORMALIZATION_READINGS))

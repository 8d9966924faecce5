"""Case and report records shared by the identity and convolution modules."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

from .errors import InvalidParams

PI2 = math.pi * math.pi


@dataclass(frozen=True)
class IdentityCase:
    id: str
    params: dict[str, Any] = field(default_factory=dict)
    variant: str | None = None

    def __post_init__(self) -> None:
        p = self.params
        if "alpha" in p:
            alpha = p["alpha"]
            if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0):
                raise InvalidParams(f"alpha must be > 0, got {alpha!r}")
            beta = p.get("beta", PI2 / alpha)
            if not beta > 0 or abs(alpha * beta - PI2) > 1e-14 * PI2:
                raise InvalidParams("alpha*beta must equal pi^2")
        for name in ("a", "b"):
            if name in p and not (math.isfinite(p[name]) and p[name] > 0):
                raise InvalidParams(f"{name} must be > 0, got {p[name]!r}")
        for name in ("k", "N", "m"):
            if name in p and not (isinstance(p[name], int) and p[name] >= 1):
                raise InvalidParams(f"{name} must be ≥ 1, got {p[name]!r}")

    @property
    def alpha(self) -> float:
        return float(self.params["alpha"])

    @property
    def beta(self) -> float:
        return float(self.params.get("beta", PI2 / self.params["alpha"]))

    def with_variant(self, variant: str | None) -> "IdentityCase":
        return IdentityCase(self.id, dict(self.params), variant)


@dataclass(frozen=True)
class IdentityReport:
    case: IdentityCase
    lhs: float | complex
    rhs: float | complex
    abs_residual: float
    rel_residual: float
    truncation_bounds: float
    variant_chosen: str | None
    tol: float

    @property
    def passed(self) -> bool:
        return self.rel_residual <= self.tol


def make_report(case: IdentityCase, lhs: float | complex, rhs: float | complex, bound: float,
                variant: str | None, tol: float) -> IdentityReport:
    if cmath.isfinite(lhs) and cmath.isfinite(rhs):
        abs_res = abs(lhs - rhs)
        rel_res = abs_res / max(abs(lhs), abs(rhs), 1.0)
    else:
        abs_res = rel_res = math.inf
    return IdentityReport(case, lhs, rhs, abs_res, rel_res, bound, variant, tol)

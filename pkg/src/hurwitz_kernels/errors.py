"""Exception types shared across the package."""

from __future__ import annotations


class HurwitzKernelError(Exception):
    """Base class for every error raised by this package."""


class PoleAt1(HurwitzKernelError, ValueError):
    """Hurwitz zeta requested too close to its pole at s = 1."""


class PoleAtNonposInt(HurwitzKernelError, ValueError):
    """Digamma requested too close to a non-positive integer."""


class NonconvergentConfig(HurwitzKernelError, ArithmeticError):
    """Euler-Maclaurin settings cannot reach the requested accuracy."""


class InvalidParams(HurwitzKernelError, ValueError):
    """Parameters violate the documented domain."""


class ToleranceUnreachable(HurwitzKernelError, ArithmeticError):
    """A series could not be brought below the requested tolerance."""


class DivergentAtOrder(HurwitzKernelError, ValueError):
    """A Dirichlet series does not converge at the requested order."""


class OnPole(HurwitzKernelError, ValueError):
    """A generating function was evaluated on one of its poles."""


class QuadratureNotConverged(HurwitzKernelError, ArithmeticError):
    """Step halving did not confirm the requested quadrature accuracy."""


class VariantUnresolved(HurwitzKernelError):
    """No reading of an identity, or more than one, fits the evidence."""

    def __init__(self, message: str, reports: list | None = None) -> None:
        super().__init__(message)
        self.reports = reports or []


class PrecisionLimit(HurwitzKernelError, ArithmeticError):
    """The requested case lies outside the range where binary64 is reliable."""

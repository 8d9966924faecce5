"""Hurwitz kernels Psi and Phi, their special functions, and numerical checks of
the Ramanujan-type identities built from them."""

from .errors import (
    DivergentAtOrder,
    HurwitzKernelError,
    InvalidParams,
    NonconvergentConfig,
    OnPole,
    PoleAt1,
    PoleAtNonposInt,
    PrecisionLimit,
    QuadratureNotConverged,
    ToleranceUnreachable,
    VariantUnresolved,
)
from .identities import REGISTRY, evaluate, resolve_variant
from .kernels import KernelParams, phi_kernel, psi_kernel
from .report import IdentityCase, IdentityReport
from .special_functions import bernoulli_number, bernoulli_polynomial, digamma, hurwitz_zeta

__version__ = "0.1.0"

__all__ = [
    "DivergentAtOrder", "HurwitzKernelError", "InvalidParams", "NonconvergentConfig", "OnPole", "PoleAt1",
    "PoleAtNonposInt", "PrecisionLimit", "QuadratureNotConverged", "ToleranceUnreachable", "VariantUnresolved",
    "REGISTRY", "evaluate", "resolve_variant", "KernelParams", "phi_kernel", "psi_kernel", "IdentityCase",
    "IdentityReport", "bernoulli_number", "bernoulli_polynomial", "digamma", "hurwitz_zeta",
]

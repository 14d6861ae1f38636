"""Gol'dman-Krivchenkov eigenbasis of H0 = -d^2/dx^2 + B x^2 + A / x^2 on (0, inf).

Units are hbar = 2m = 1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import SignedLog, f11_eval, log_gamma

__all__ = [
    "BasisParams",
    "from_goldman",
    "energy",
    "energy_goldman",
    "norm_const_sq",
    "norm_const",
    "eval_wavefunction",
]


@dataclass(frozen=True)
class BasisParams:
    """Potential coefficients of ``B x**2 + A / x**2``."""

    A: float
    B: float

    def __post_init__(self):
        if not (math.isfinite(self.A) and self.A >= 0.0):
            raise ValueError(f"A must be finite and >= 0, got {self.A!r}")
        if not (math.isfinite(self.B) and self.B > 0.0):
            raise ValueError(f"B must be finite and > 0, got {self.B!r}")

    @property
    def root(self) -> float:
        """sqrt(1 + 4A)."""
        return math.sqrt(1.0 + 4.0 * self.A)

    @property
    def gamma_p(self) -> float:
        """Second parameter of the 1F1 polynomials, 1 + sqrt(1 + 4A) / 2."""
        return 1.0 + 0.5 * self.root

    @property
    def lam(self) -> float:
        return math.sqrt(self.B)

    @property
    def alpha_max(self) -> float:
        """Supremum of admissible alpha, 2 + sqrt(1 + 4A)."""
        return 2.0 + self.root


def from_goldman(V0: float, a: float) -> BasisParams:
    """Map the potential V0 (a/x - x/a)**2 onto (A, B); the constant -2 V0 is dropped."""
    if not V0 > 0 or not a > 0:
        raise ValueError("from_goldman requires V0 > 0 and a > 0")
    return BasisParams(A=V0 * a * a, B=V0 / (a * a))


def energy(p: BasisParams, n: int) -> float:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return p.lam * (4 * n + 2 + p.root)


def energy_goldman(V0: float, a: float, n: int, shifted: bool = True) -> float:
    """Level n of -psi'' + V0 (a/x - x/a)**2 psi = E psi.

    Expanding the square gives B x**2 + A / x**2 - 2 V0, so the raw level sits
    2 V0 below :func:`energy`. With ``shifted=True`` (default) that constant is
    added back and the result equals ``energy(from_goldman(V0, a), n)``.
    """
    if not V0 > 0 or not a > 0:
        raise ValueError("energy_goldman requires V0 > 0 and a > 0")
    if n < 0:
        raise ValueError("n must be nonnegative")
    s = math.sqrt(V0)
    e = 4.0 / a * s * (n + 0.5 + 0.25 * (math.sqrt(1.0 + 4.0 * V0 * a * a) - 2.0 * a * s))
    return e + 2.0 * V0 if shifted else e


def norm_const_sq(p: BasisParams, n: int) -> SignedLog:
    """C_n**2 = 2 B**(gamma/2) Gamma(n + gamma) / (n! Gamma(gamma)**2), in log space."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    g = p.gamma_p
    logmag = (
        math.log(2.0)
        + 0.5 * g * math.log(p.B)
        + log_gamma(n + g)
        - log_gamma(n + 1.0)
        - 2.0 * log_gamma(g)
    )
    return SignedLog(1, logmag)


def norm_const(p: BasisParams, n: int) -> SignedLog:
    return norm_const_sq(p, n).sqrt()


def eval_wavefunction(p: BasisParams, n: int, x: float) -> float:
    """psi_n(x) = C_n x**(gamma - 1/2) exp(-sqrt(B) x**2 / 2) 1F1(-n, gamma; sqrt(B) x**2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not x > 0:
        raise ValueError(f"wavefunction is evaluated on x > 0 only, got {x!r}")
    g = p.gamma_p
    r = p.lam * x * x
    poly = f11_eval(n, g, r)
    if poly == 0.0:
        return 0.0
    logpref = norm_const(p, n).logmag + (g - 0.5) * math.log(x) - 0.5 * r
    return math.copysign(math.exp(logpref + math.log(abs(poly))), poly)

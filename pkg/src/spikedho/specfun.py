"""Special-function kernel: log-gamma, sign-tracked gamma, Pochhammer symbols
and the terminating confluent hypergeometric polynomial 1F1(-n, g; z).

Everything that can overflow is carried as a :class:`SignedLog`; conversion to
a plain float is left to the caller's outermost sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SignedLog",
    "POLE",
    "log_gamma",
    "gamma_signed",
    "rgamma_signed",
    "pochhammer_signed",
    "f11_monomial_coeffs",
    "f11_eval",
]

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286061

# B_{2k} / (2k (2k-1)), k = 1..9
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
)
_STIRLING_MIN = 10.0

# zeta(k), k = 2..30, for the Taylor series of ln Gamma(1 + z); the tail
# k = 31..56 is extended below with the first four terms of the zeta sum
_ZETA = (
    1.6449340668482264365,
    1.2020569031595942854,
    1.0823232337111381915,
    1.0369277551433699263,
    1.0173430619844491397,
    1.0083492773819228268,
    1.0040773561979443394,
    1.0020083928260822144,
    1.0009945751278180853,
    1.0004941886041194646,
    1.0002460865533080483,
    1.0001227133475784891,
    1.0000612481350587048,
    1.0000305882363070205,
    1.0000152822594086519,
    1.0000076371976378998,
    1.0000038172932649998,
    1.0000019082127165539,
    1.0000009539620338728,
    1.0000004769329867878,
    1.0000002384505027277,
    1.0000001192199259653,
    1.0000000596081890513,
    1.0000000298035035147,
    1.0000000149015548284,
    1.0000000074507117898,
    1.0000000037253340248,
    1.0000000018626597235,
    1.0000000009313274324,
) + tuple(1.0 + 2.0**-k + 3.0**-k + 4.0**-k for k in range(31, 57))
_TAYLOR_RADIUS = 0.5


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as ``sign * exp(logmag)``.

    ``sign == 0`` is exact zero; ``logmag`` is then ignored.
    """

    sign: int
    logmag: float = 0.0

    @classmethod
    def from_float(cls, x: float) -> "SignedLog":
        if x == 0.0:
            return ZERO
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.logmag + other.logmag)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if other.sign == 0:
            raise ZeroDivisionError("division by SignedLog zero")
        if self.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.logmag - other.logmag)

    def __neg__(self) -> "SignedLog":
        return SignedLog(-self.sign, self.logmag)

    def reciprocal(self) -> "SignedLog":
        return ONE / self

    def sqrt(self) -> "SignedLog":
        if self.sign < 0:
            raise ValueError("square root of a negative SignedLog")
        if self.sign == 0:
            return ZERO
        return SignedLog(1, 0.5 * self.logmag)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.logmag)

    value = __float__


ZERO = SignedLog(0, 0.0)
ONE = SignedLog(1, 0.0)


class _Pole:
    """Marker for Gamma at a nonpositive integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "POLE"

    def __reduce__(self):
        return (_Pole, ())


POLE = _Pole()


def _lgamma1p_taylor(z: float) -> float:
    # ln Gamma(1+z) = -g z + sum_{k>=2} (-1)^k zeta(k) z^k / k, |z| < 1
    acc = 0.0
    for k in range(len(_ZETA) + 1, 1, -1):
        acc = acc * z + (-1) ** k * _ZETA[k - 2] / k
    return z * (-_EULER_GAMMA + z * acc)


def _lgamma_stirling(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    for c in reversed(_STIRLING):
        corr = corr * inv2 + c
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + corr * inv


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Stirling series above x = 10 with upward recurrence below it, and a
    Taylor expansion about the two zeros at x = 1 and x = 2 so that the
    relative error stays small there too.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise ValueError(f"log_gamma requires a finite x > 0, got {x!r}")
    if abs(x - 1.0) < _TAYLOR_RADIUS:
        return _lgamma1p_taylor(x - 1.0)
    if abs(x - 2.0) <= _TAYLOR_RADIUS:
        z = x - 2.0
        return _lgamma1p_taylor(z) + math.log1p(z)
    if x >= _STIRLING_MIN:
        return _lgamma_stirling(x)
    k = math.ceil(_STIRLING_MIN - x)
    prod = x
    for i in range(1, k):
        prod *= x + i
    return _lgamma_stirling(x + k) - math.log(prod)


def _sinpi(x: float) -> float:
    # sin(pi x) with the argument reduced exactly to [-1/2, 1/2]
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def gamma_signed(x: float) -> SignedLog | _Pole:
    """Gamma(x) as a SignedLog, or :data:`POLE` at nonpositive integers."""
    x = float(x)
    if x > 0.0:
        return SignedLog(1, log_gamma(x))
    if x == math.floor(x):
        return POLE
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    s = _sinpi(x)
    sign = 1 if s > 0 else -1
    return SignedLog(sign, math.log(math.pi) - math.log(abs(s)) - log_gamma(1.0 - x))


def rgamma_signed(x: float) -> SignedLog:
    """1/Gamma(x); exactly zero at the poles."""
    g = gamma_signed(x)
    if g is POLE:
        return ZERO
    return g.reciprocal()


def pochhammer_signed(a: float, k: int) -> SignedLog:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1) by direct product.

    Never routed through a gamma quotient, so a zero factor gives an exact
    zero even when both gammas would be poles.
    """
    if k < 0:
        raise ValueError("pochhammer_signed requires k >= 0")
    sign = 1
    logmag = 0.0
    for i in range(k):
        f = a + i
        if f == 0.0:
            return ZERO
        if f < 0.0:
            sign = -sign
        logmag += math.log(abs(f))
    return SignedLog(sign, logmag)


def f11_monomial_coeffs(n: int, gamma: float) -> list[float]:
    """Coefficients c_j of 1F1(-n, gamma; z) = sum_j c_j z**j, j = 0..n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    coeffs = [1.0]
    c = 1.0
    for j in range(n):
        c *= (j - n) / ((gamma + j) * (j + 1))
        coeffs.append(c)
    return coeffs


def f11_eval(n: int, gamma: float, z: float) -> float:
    """Evaluate the degree-n polynomial 1F1(-n, gamma; z) by Horner's rule."""
    acc = 0.0
    for c in reversed(f11_monomial_coeffs(n, gamma)):
        acc = acc * z + c
    return acc

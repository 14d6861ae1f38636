"""Closed-form matrix elements <m| x**(-alpha) |n> in the GK basis.

Phase convention: the elements carry the factor (-1)**(m+n), i.e. they are
taken between the states (-1)**n psi_n. For A = 0, B = 1 these coincide with
the odd Hermite functions e^{-x^2/2} H_{2n+1}(x) (positive leading
coefficient), which is the convention of the tabulated small-index entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainDiverges, IndexOutOfTable, InvalidIndex
from .gk_basis import BasisParams, norm_const_sq
from .specfun import log_gamma, pochhammer_signed

__all__ = [
    "MatElemQuery",
    "MatElemResult",
    "METHODS",
    "LOW_CONFIDENCE_RATIO",
    "check_domain",
    "matel_gk",
    "matel_gk_detailed",
    "matel_row0",
    "matel_hermite",
    "evaluate",
    "ExplicitEntry",
    "PRINTED_TABLE",
    "CORRECTED_TABLE",
    "explicit_table_eval",
    "X33_A0_CORRECTED",
    "X33_A0_LEGACY",
    "x33_a0_eval",
    "erratum_report",
    "ErratumRow",
    "ErratumReport",
]

METHODS = ("closed", "termwise", "quadrature", "table", "row0", "hermite")
LOW_CONFIDENCE_RATIO = 1e12


def _check_index(i, name: str) -> int:
    if isinstance(i, bool) or not isinstance(i, int) and not (
        isinstance(i, float) and i.is_integer()
    ):
        raise InvalidIndex(f"{name} must be an integer, got {i!r}")
    i = int(i)
    if i < 0:
        raise InvalidIndex(f"{name} must be >= 0, got {i}")
    return i


def check_domain(alpha: float, params: BasisParams) -> None:
    """Raise unless 0 <= alpha < 2 + sqrt(1 + 4A)."""
    if not math.isfinite(alpha) or alpha < 0:
        raise ValueError(f"alpha must be finite and >= 0, got {alpha!r}")
    if alpha >= params.alpha_max:
        raise DomainDiverges(
            f"alpha ≥ 2+sqrt(1+4A) ({alpha:g} ≥ {params.alpha_max:.17g}); "
            "the integral diverges at the origin"
        )


@dataclass(frozen=True)
class MatElemQuery:
    m: int
    n: int
    alpha: float
    params: BasisParams = field(default_factory=lambda: BasisParams(0.0, 1.0))
    method: str = "closed"

    def __post_init__(self):
        object.__setattr__(self, "m", _check_index(self.m, "m"))
        object.__setattr__(self, "n", _check_index(self.n, "n"))
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        check_domain(self.alpha, self.params)


@dataclass(frozen=True)
class MatElemResult:
    value: float
    severity: float  # largest term / |sum|, both in the same scaling
    nterms: int

    @property
    def low_confidence(self) -> bool:
        return not self.severity <= LOW_CONFIDENCE_RATIO


def _log_binom(m: int, k: int) -> float:
    return math.log(math.comb(m, k))


def matel_gk_detailed(q: MatElemQuery) -> MatElemResult:
    """Closed-form element with a cancellation diagnostic.

    The sum runs over the smaller index. Gamma(alpha/2 + n - k) / Gamma(alpha/2 - k)
    is evaluated as the rising factorial (alpha/2 - k)_n, which is exactly zero
    whenever the gamma in the denominator has a pole and stays finite when
    both do.
    """
    p = q.params
    m, n = sorted((q.m, q.n))
    g = p.gamma_p
    h = 0.5 * q.alpha

    logpref = (
        0.5 * (norm_const_sq(p, n).logmag + norm_const_sq(p, m).logmag)
        - math.log(2.0)
        + (0.25 * q.alpha - 0.5 * g) * math.log(p.B)
        + 2.0 * log_gamma(g)
        - log_gamma(n + g)
    )

    signs = []
    logs = []
    for k in range(m + 1):
        poch = pochhammer_signed(h - k, n)
        if poch.is_zero:
            continue
        signs.append((-1) ** k * poch.sign)
        logs.append(
            _log_binom(m, k) + log_gamma(k + g - h) - log_gamma(k + g) + poch.logmag
        )
    if not logs:
        return MatElemResult(0.0, 1.0, 0)

    top = max(logs)
    s = math.fsum(sg * math.exp(lg - top) for sg, lg in zip(signs, logs))
    severity = math.inf if s == 0.0 else 1.0 / abs(s)
    value = (-1) ** (n + m) * s * math.exp(logpref + top)
    return MatElemResult(value, severity, len(logs))


def matel_gk(q: MatElemQuery) -> float:
    return matel_gk_detailed(q).value


def matel_row0(q: MatElemQuery) -> float:
    """<0| x**(-alpha) |n>, the single-term special case of the closed form."""
    if q.m != 0:
        raise InvalidIndex(f"matel_row0 needs m = 0, got m = {q.m}")
    p = q.params
    n = q.n
    g = p.gamma_p
    h = 0.5 * q.alpha
    # Gamma(h + n) / Gamma(h) as (h)_n: zero at alpha = 0 for n >= 1
    poch = pochhammer_signed(h, n)
    if poch.is_zero:
        return 0.0
    logmag = (
        0.25 * q.alpha * math.log(p.B)
        + 0.5 * (log_gamma(g) - log_gamma(n + 1.0) - log_gamma(n + g))
        + log_gamma(g - h)
        - log_gamma(g)
        + poch.logmag
    )
    return (-1) ** n * poch.sign * math.exp(logmag)


def matel_hermite(m: int, n: int, alpha: float) -> float:
    """Element between normalized odd Hermite functions on (0, inf).

    Same sum as the GK closed form with gamma = 3/2; the (2n+1)! prefactor
    needs the extra factor 1/(3/2)_n to describe unit-norm states.
    """
    m = _check_index(m, "m")
    n = _check_index(n, "n")
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 0:
        raise ValueError(f"alpha must be finite and >= 0, got {alpha!r}")
    if alpha >= 3.0:
        raise DomainDiverges(f"alpha ≥ 3 ({alpha:g}); the integral diverges at the origin")
    h = 0.5 * alpha
    logpref = (
        0.5 * (log_gamma(2 * n + 2.0) + log_gamma(2 * m + 2.0))
        - (n + m) * math.log(2.0)
        - log_gamma(n + 1.0)
        - log_gamma(m + 1.0)
        - pochhammer_signed(1.5, n).logmag
    )
    signs = []
    logs = []
    for k in range(m + 1):
        poch = pochhammer_signed(h - k, n)
        if poch.is_zero:
            continue
        signs.append((-1) ** k * poch.sign)
        logs.append(
            _log_binom(m, k) + log_gamma(k + 1.5 - h) - log_gamma(k + 1.5) + poch.logmag
        )
    if not logs:
        return 0.0
    top = max(logs)
    s = math.fsum(sg * math.exp(lg - top) for sg, lg in zip(signs, logs))
    return (-1) ** (n + m) * s * math.exp(logpref + top)


def evaluate(q: MatElemQuery) -> float:
    """Dispatch on ``q.method``."""
    if q.method == "closed":
        return matel_gk(q)
    if q.method == "row0":
        if q.m == 0:
            return matel_row0(q)
        if q.n == 0:
            return matel_row0(MatElemQuery(0, q.m, q.alpha, q.params))
        raise InvalidIndex("method 'row0' needs m = 0 or n = 0")
    if q.method == "table":
        return explicit_table_eval(q.m, q.n, q.alpha, q.params)
    if q.method == "hermite":
        if q.params.A != 0.0 or q.params.B != 1.0:
            raise ValueError("method 'hermite' is only defined for A = 0, B = 1")
        return matel_hermite(q.m, q.n, q.alpha)
    from . import oracle

    if q.method == "termwise":
        return oracle.matel_termwise(q)
    return oracle.matel_quadrature(q)


# ---------------------------------------------------------------------------
# Explicit 4 x 4 block
#
# value = sign * B**(alpha/4) * Gamma(gamma - alpha/2) * P(alpha, gamma)
#         / (denom * sqrt(sqrt_int * prod_i (gamma + i)) * Gamma(gamma + gamma_shift))
#
# P is stored as ascending alpha-coefficients, each one an ascending tuple of
# gamma-coefficients.


@dataclass(frozen=True)
class ExplicitEntry:
    sign: int
    denom: int
    sqrt_int: int
    sqrt_gamma_shifts: tuple[int, ...]
    gamma_shift: int
    poly: tuple[tuple[float, ...], ...]

    def poly_coeffs(self, gamma: float) -> list[float]:
        """Ascending alpha-coefficients at a given gamma."""
        return [sum(c * gamma**i for i, c in enumerate(cg)) for cg in self.poly]

    def __call__(self, alpha: float, gamma: float, B: float = 1.0) -> float:
        poly = 0.0
        for c in reversed(self.poly_coeffs(gamma)):
            poly = poly * alpha + c
        root = self.sqrt_int * math.prod(gamma + i for i in self.sqrt_gamma_shifts)
        logmag = (
            0.25 * alpha * math.log(B)
            + log_gamma(gamma - 0.5 * alpha)
            - log_gamma(gamma + self.gamma_shift)
            - math.log(self.denom)
            - 0.5 * math.log(root)
        )
        return self.sign * poly * math.exp(logmag)


PRINTED_TABLE: dict[tuple[int, int], ExplicitEntry] = {
    (0, 0): ExplicitEntry(1, 1, 1, (), 0, ((1,),)),
    (0, 1): ExplicitEntry(-1, 2, 1, (0,), 0, ((0,), (1,))),
    (0, 2): ExplicitEntry(1, 4, 2, (0, 1), 0, ((0,), (2,), (1,))),
    (0, 3): ExplicitEntry(-1, 8, 6, (0, 1, 2), 0, ((0,), (8,), (6,), (1,))),
    (1, 1): ExplicitEntry(1, 4, 1, (), 1, ((0, 4), (-2,), (1,))),
    (1, 2): ExplicitEntry(-1, 8, 2, (1,), 1, ((0,), (0, 8), (-2,), (1,))),
    (1, 3): ExplicitEntry(1, 16, 6, (2, 1), 1, ((0,), (0, 24), (-4, 12), (0,), (1,))),
    (2, 2): ExplicitEntry(
        1, 32, 1, (), 2, ((0, 32, 32), (-16, -32), (12, 16), (-4,), (1,))
    ),
    (2, 3): ExplicitEntry(
        1, 32, 12, (2,), 2, ((0,), (0, 96, 96), (-32, -48), (20, 24), (-4,), (1,))
    ),
    (3, 3): ExplicitEntry(
        1,
        384,
        1,
        (),
        3,
        (
            (0, 768, 1152, 384),
            (-192, -1152, -576),
            (272, 720, 288),
            (-208, -144),
            (72, 36),
            (-8,),
            (1,),
        ),
    ),
}

# Two entries of the printed block disagree with the general formula (checked
# symbolically and against both oracles): (2,3) has the wrong overall sign, and
# the (3,3) polynomial is garbled. The corrected (3,3) reduces at gamma = 3/2
# to X33_A0_CORRECTED.
CORRECTED_TABLE: dict[tuple[int, int], ExplicitEntry] = dict(PRINTED_TABLE)
CORRECTED_TABLE[(2, 3)] = ExplicitEntry(
    -1, 32, 12, (2,), 2, ((0,), (0, 96, 96), (-32, -48), (20, 24), (-4,), (1,))
)
CORRECTED_TABLE[(3, 3)] = ExplicitEntry(
    1,
    384,
    1,
    (),
    3,
    (
        (0, 768, 1152, 384),
        (-384, -1152, -576),
        (352, 720, 288),
        (-168, -144),
        (52, 36),
        (-6,),
        (1,),
    ),
)


def explicit_table_eval(
    m: int, n: int, alpha: float, p: BasisParams, corrected: bool = True
) -> float:
    """Evaluate a tabulated entry, m, n <= 3; (n, m) falls back to (m, n)."""
    m = _check_index(m, "m")
    n = _check_index(n, "n")
    if m > 3 or n > 3:
        raise IndexOutOfTable((m, n))
    check_domain(alpha, p)
    table = CORRECTED_TABLE if corrected else PRINTED_TABLE
    return table[min(m, n), max(m, n)](alpha, p.gamma_p, p.B)


# (3,3) at A = 0, B = 1: Gamma((3 - alpha)/2) / (7! Gamma(3/2)) * P(alpha),
# ascending coefficients. LEGACY is an older, incorrect Hermite-basis polynomial.
X33_A0_CORRECTED = (5040, -3408, 2080, -384, 106, -6, 1)
X33_A0_LEGACY = (5040, -3968, 1660, -454, 106, -6, 1)


def x33_a0_eval(alpha: float, coeffs: Sequence[float] = X33_A0_CORRECTED) -> float:
    poly = 0.0
    for c in reversed(coeffs):
        poly = poly * alpha + c
    return poly * math.exp(
        log_gamma(0.5 * (3.0 - alpha)) - math.log(5040.0) - log_gamma(1.5)
    )


@dataclass(frozen=True)
class ErratumRow:
    alpha: float
    closed: float
    corrected: float
    legacy: float

    @property
    def rel_err_corrected(self) -> float:
        return abs(self.closed - self.corrected) / abs(self.closed)

    @property
    def mismatch(self) -> float:
        return abs(self.closed - self.legacy)


@dataclass(frozen=True)
class ErratumReport:
    rows: tuple[ErratumRow, ...]
    rtol: float = 1e-10
    min_mismatch: float = 1e-6

    @property
    def passed(self) -> bool:
        for r in self.rows:
            if r.rel_err_corrected > self.rtol:
                return False
            # the two polynomials differ by 70 a (a+2)(a+4), which vanishes only at a = 0
            if r.alpha != 0.0 and r.mismatch <= self.min_mismatch:
                return False
        return True


def erratum_report(alpha_samples: Sequence[float]) -> ErratumReport:
    """Compare the (3,3) element at A = 0, B = 1 with both printed polynomials."""
    p = BasisParams(0.0, 1.0)
    rows = []
    for a in alpha_samples:
        a = float(a)
        closed = matel_gk(MatElemQuery(3, 3, a, p))
        rows.append(ErratumRow(a, closed, x33_a0_eval(a), x33_a0_eval(a, X33_A0_LEGACY)))
    return ErratumReport(tuple(rows))

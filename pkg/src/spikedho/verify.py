"""Named verification suites behind ``spikedho verify``.

Each suite returns a :class:`SuiteReport`: one :class:`Case` per check with the
observed maximum error and the threshold it is held to.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .gk_basis import BasisParams
from .matrix_elements import (
    CORRECTED_TABLE,
    MatElemQuery,
    erratum_report,
    explicit_table_eval,
    matel_gk,
    matel_hermite,
    x33_a0_eval,
)
from .oracle import matel_quadrature, matel_termwise, overlap_quadrature, parseval_sequence
from .variational import assemble_hamiltonian, ground_state_sweep

A_GRID = (0.0, 0.5, 2.0, 10.0)
B_GRID = (0.25, 1.0, 4.0)
ORACLE_ALPHAS = (0.5, 1.0, 1.5, 1.999)
_BELOW_ZERO = -math.ulp(0.0)


@dataclass
class Case:
    name: str
    max_error: float
    threshold: float
    passed: bool = field(init=False)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.max_error <= self.threshold)


@dataclass
class SuiteReport:
    suite: str
    cases: list[Case]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "cases": [asdict(c) for c in self.cases],
        }


def _grid():
    for A in A_GRID:
        for B in B_GRID:
            yield BasisParams(A, B)


def suite_orthonormality() -> SuiteReport:
    cases = []
    for p in _grid():
        err = max(
            abs(overlap_quadrature(p, m, n) - (m == n)) for m in range(13) for n in range(13)
        )
        cases.append(Case(f"A={p.A:g},B={p.B:g}", err, 1e-10))
    return SuiteReport("orthonormality", cases)


def suite_symmetry() -> SuiteReport:
    cases = []
    for p in _grid():
        worst = 0.0
        for alpha in ORACLE_ALPHAS:
            for m in range(11):
                for n in range(m):
                    a = matel_gk(MatElemQuery(m, n, alpha, p))
                    b = matel_gk(MatElemQuery(n, m, alpha, p))
                    worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
        cases.append(Case(f"A={p.A:g},B={p.B:g}", worst, 1e-9))
    eye = max(
        abs(matel_gk(MatElemQuery(m, n, 1e-8)) - (m == n)) for m in range(11) for n in range(11)
    )
    cases.append(Case("alpha=1e-8 identity", eye, 1e-6))
    return SuiteReport("symmetry", cases)


def suite_oracles() -> SuiteReport:
    cases = []
    for p in _grid():
        tw = qd = 0.0
        for alpha in ORACLE_ALPHAS:
            for m in range(11):
                for n in range(11):
                    q = MatElemQuery(m, n, alpha, p)
                    x = matel_gk(q)
                    tw = max(tw, abs(matel_termwise(q) - x) / abs(x))
                    qd = max(qd, abs(matel_quadrature(q) - x) / abs(x))
        cases.append(Case(f"termwise A={p.A:g},B={p.B:g}", tw, 1e-10))
        cases.append(Case(f"quadrature A={p.A:g},B={p.B:g}", qd, 1e-10))
    return SuiteReport("oracles", cases)


def suite_section5(samples: int = 20, seed: int = 0) -> SuiteReport:
    rng = np.random.default_rng(seed)
    cases = []
    for A in (0.0, 0.5, 2.0):
        p = BasisParams(A, 1.0)
        hi = min(2.9, 2 * p.gamma_p - 0.1)
        for m, n in sorted(CORRECTED_TABLE):
            worst = 0.0
            for alpha in rng.uniform(0.1, hi, samples):
                x = matel_gk(MatElemQuery(m, n, alpha, p))
                worst = max(worst, abs(explicit_table_eval(m, n, alpha, p) - x) / abs(x))
            cases.append(Case(f"x{m}{n} A={A:g}", worst, 1e-10))
    return SuiteReport("section5", cases)


def suite_hermite() -> SuiteReport:
    p = BasisParams(0.0, 1.0)
    worst = 0.0
    for alpha in (0.5, 1.0, 1.5, 2.5):
        for m in range(9):
            for n in range(9):
                x = matel_gk(MatElemQuery(m, n, alpha, p))
                worst = max(worst, abs(matel_hermite(m, n, alpha) - x) / abs(x))
    H = assemble_hamiltonian(p, 1.0, 0.0, 32)
    diag = max(abs(H[n, n] - (3 + 4 * n)) for n in range(32))
    return SuiteReport(
        "hermite",
        [Case("hermite vs closed", worst, 1e-10), Case("lambda=0 diagonal 3+4n", diag, 0.0)],
    )


def suite_erratum() -> SuiteReport:
    alphas = (0.5, 1.0, 1.5, 2.0, 2.5)
    rep = erratum_report(alphas)
    corr = max(r.rel_err_corrected for r in rep.rows)
    diff = 0.0
    table = []
    for r in rep.rows:
        a = r.alpha
        expected = x33_a0_eval(a, (0, 560, 420, 70))  # 70 a (a+2)(a+4)
        diff = max(diff, abs((r.closed - r.legacy) - expected) / abs(expected))
        table.append({"alpha": a, "closed": r.closed, "legacy": r.legacy, "difference": r.closed - r.legacy})
    return SuiteReport(
        "erratum",
        [
            Case("closed vs corrected x33", corr, 1e-10),
            Case("closed - legacy = 70a(a+2)(a+4) term", diff, 1e-9, details={"rows": table}),
        ],
    )


def suite_parseval() -> SuiteReport:
    p = BasisParams(0.0, 1.0)
    s, norm = parseval_sequence(p, "x_exp", 40)
    drops = float(max(0.0, -np.min(np.diff(s))))
    return SuiteReport(
        "parseval",
        [
            Case("monotone partial sums", drops, 0.0),
            Case("bounded by ||f||^2", max(0.0, float(s.max()) - norm), 1e-9),
            # strict inequalities: error must be negative
            Case("S_40 > 0.249", 0.249 - float(s[40]), _BELOW_ZERO, details={"S_40": float(s[40])}),
        ],
    )


def suite_alpha2() -> SuiteReport:
    p = BasisParams(0.0, 1.0)
    lam = 0.5
    exact = 2.0 + math.sqrt(1.0 + 4.0 * lam)
    res = ground_state_sweep(p, 2.0, lam, [4, 8, 16, 32, 64])
    e0 = [r.ground for r in res]
    rises = max(0.0, max(b - a for a, b in zip(e0, e0[1:])))
    below = max(0.0, max(exact - e for e in e0))
    gaps = [e - exact for e in e0]
    return SuiteReport(
        "alpha2",
        [
            Case("E0(N) non-increasing", rises, 1e-10),
            Case("E0(N) >= exact - 1e-9", below, 1e-9),
            Case("gap(64) < gap(4)", gaps[-1] - gaps[0], _BELOW_ZERO, details={"gaps": gaps}),
        ],
    )


SUITES: dict[str, Callable[[], SuiteReport]] = {
    "orthonormality": suite_orthonormality,
    "symmetry": suite_symmetry,
    "oracles": suite_oracles,
    "section5": suite_section5,
    "hermite": suite_hermite,
    "erratum": suite_erratum,
    "parseval": suite_parseval,
    "alpha2": suite_alpha2,
}


def run_suite(name: str) -> SuiteReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn()

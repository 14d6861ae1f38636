"""Rayleigh-Ritz treatment of H = H0 + lambda x**(-alpha) in the truncated GK basis.

H[m, n] = E_n delta_mn + lambda <m| x**(-alpha) |n>, m, n < N, diagonalized
with a cyclic Jacobi solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoConvergence
from .gk_basis import BasisParams, energy
from .matrix_elements import MatElemQuery, check_domain, evaluate

__all__ = [
    "SymMatrix",
    "EigenResult",
    "SpectrumResult",
    "FILL_SOURCES",
    "jacobi_eigen",
    "perturbation_matrix",
    "assemble_hamiltonian",
    "spectrum",
    "ground_state_sweep",
    "lambda_sweep",
]

FILL_SOURCES = ("closed", "termwise", "quadrature")
DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 50


class SymMatrix:
    """Dense symmetric matrix kept as its packed lower triangle (row-major)."""

    def __init__(self, order: int, packed=None):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        size = order * (order + 1) // 2
        if packed is None:
            self._data = np.zeros(size)
        else:
            self._data = np.array(packed, dtype=float)
            if self._data.shape != (size,):
                raise ValueError(f"packed storage needs {size} entries")

    @staticmethod
    def _index(i: int, j: int) -> int:
        if j > i:
            i, j = j, i
        return i * (i + 1) // 2 + j

    def __getitem__(self, ij) -> float:
        i, j = ij
        return float(self._data[self._index(i, j)])

    def __setitem__(self, ij, value: float) -> None:
        i, j = ij
        self._data[self._index(i, j)] = value

    @classmethod
    def from_dense(cls, a) -> "SymMatrix":
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("expected a square matrix")
        rows, cols = np.tril_indices(n)
        return cls(n, a[rows, cols])

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "SymMatrix":
        return cls.from_dense(np.diag(np.asarray(values, dtype=float)))

    @property
    def packed(self) -> np.ndarray:
        return self._data.copy()

    def to_dense(self) -> np.ndarray:
        n = self.order
        a = np.zeros((n, n))
        rows, cols = np.tril_indices(n)
        a[rows, cols] = self._data
        a[cols, rows] = self._data
        return a

    def leading(self, k: int) -> "SymMatrix":
        """The leading k x k block (nested basis)."""
        if not 1 <= k <= self.order:
            raise ValueError(f"block size {k} out of range 1..{self.order}")
        return SymMatrix(k, self._data[: k * (k + 1) // 2])

    def trace(self) -> float:
        return float(sum(self[i, i] for i in range(self.order)))

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.to_dense()))

    def __repr__(self) -> str:
        return f"SymMatrix(order={self.order})"


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray  # ascending
    residual_norm: float  # off-diagonal Frobenius norm at exit
    sweeps: int
    eigenvectors: np.ndarray | None = None  # columns, same order as eigenvalues


def jacobi_eigen(
    M: SymMatrix,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    vectors: bool = False,
) -> EigenResult:
    """Cyclic (row-order) Jacobi diagonalization.

    Stops once the off-diagonal Frobenius norm is at most ``tol * ||M||_F`` or
    a full sweep applies no rotation. Raises NoConvergence otherwise.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = M.to_dense()
    n = M.order
    v = np.eye(n) if vectors else None
    scale = float(np.linalg.norm(a))
    eps = np.finfo(float).eps

    def off_norm() -> float:
        # summed directly: ||a||^2 - sum(diag^2) cancels below sqrt(eps) ||a||
        return float(np.sqrt(2.0 * np.sum(np.tril(a, -1) ** 2)))

    sweeps = 0
    off = off_norm()
    while off > tol * scale:
        if sweeps >= max_sweeps:
            raise NoConvergence(
                f"Jacobi: off-diagonal norm {off:.3e} > {tol:.1e} * {scale:.3e} "
                f"after {max_sweeps} sweeps"
            )
        sweeps += 1
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                if abs(apq) <= 0.5 * eps * math.sqrt(abs(app * aqq)) and app != aqq:
                    # below rounding of the diagonal: annihilate without rotating
                    a[p, q] = a[q, p] = 0.0
                    continue
                d = aqq - app
                if abs(d) > 1e150 * abs(apq):
                    # theta would overflow; t -> 1 / (2 theta)
                    t = apq / d
                else:
                    theta = d / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
                rotated = True
        off = off_norm()
        if not rotated:
            break

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return EigenResult(
        eigenvalues=w[order],
        residual_norm=off,
        sweeps=sweeps,
        eigenvectors=None if v is None else v[:, order],
    )


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: tuple[float, ...]
    N: int
    lambda_c: float
    alpha: float
    params: BasisParams
    residual_norm: float
    sweeps: int = 0

    @property
    def ground(self) -> float:
        return self.eigenvalues[0]


def perturbation_matrix(
    p: BasisParams, alpha: float, N: int, fill: str = "closed"
) -> SymMatrix:
    """<m| x**(-alpha) |n> for m, n < N; only the lower triangle is computed."""
    if fill not in FILL_SOURCES:
        raise ValueError(f"unknown fill source {fill!r}; choose from {FILL_SOURCES}")
    if N < 1:
        raise ValueError("N must be >= 1")
    check_domain(alpha, p)
    V = SymMatrix(N)
    for m in range(N):
        for n in range(m + 1):
            V[m, n] = evaluate(MatElemQuery(m, n, alpha, p, method=fill))
    return V


def _hamiltonian(p: BasisParams, lambda_c: float, V: SymMatrix) -> SymMatrix:
    N = V.order
    H = SymMatrix(N, lambda_c * V.packed)
    for n in range(N):
        H[n, n] = energy(p, n) + lambda_c * V[n, n]
    return H


def assemble_hamiltonian(
    p: BasisParams, alpha: float, lambda_c: float, N: int, fill: str = "closed"
) -> SymMatrix:
    if not lambda_c >= 0:
        raise ValueError("lambda_c must be >= 0")
    if lambda_c == 0:
        check_domain(alpha, p)
        return SymMatrix.diagonal([energy(p, n) for n in range(N)])
    return _hamiltonian(p, lambda_c, perturbation_matrix(p, alpha, N, fill))


def _spectrum_of(H, p, alpha, lambda_c, tol, max_sweeps) -> SpectrumResult:
    res = jacobi_eigen(H, tol=tol, max_sweeps=max_sweeps)
    return SpectrumResult(
        eigenvalues=tuple(float(e) for e in res.eigenvalues),
        N=H.order,
        lambda_c=float(lambda_c),
        alpha=float(alpha),
        params=p,
        residual_norm=res.residual_norm,
        sweeps=res.sweeps,
    )


def spectrum(
    p: BasisParams,
    alpha: float,
    lambda_c: float,
    N: int,
    fill: str = "closed",
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> SpectrumResult:
    H = assemble_hamiltonian(p, alpha, lambda_c, N, fill)
    return _spectrum_of(H, p, alpha, lambda_c, tol, max_sweeps)


def ground_state_sweep(
    p: BasisParams,
    alpha: float,
    lambda_c: float,
    N_list: Sequence[int],
    fill: str = "closed",
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> list[SpectrumResult]:
    """Spectra for a nested sequence of basis sizes.

    The largest Hamiltonian is built once; smaller ones are its leading blocks.
    """
    N_list = [int(N) for N in N_list]
    if not N_list or any(N < 1 for N in N_list):
        raise ValueError("N_list must hold positive integers")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly ascending")
    H = assemble_hamiltonian(p, alpha, lambda_c, N_list[-1], fill)
    return [
        _spectrum_of(H.leading(N), p, alpha, lambda_c, tol, max_sweeps) for N in N_list
    ]


def lambda_sweep(
    p: BasisParams,
    alpha: float,
    lambdas: Sequence[float],
    N: int,
    fill: str = "closed",
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> list[SpectrumResult]:
    """Spectra at fixed N for each coupling; the x**(-alpha) block is filled once."""
    lambdas = [float(x) for x in lambdas]
    if any(not x >= 0 for x in lambdas):
        raise ValueError("couplings must be >= 0")
    V = perturbation_matrix(p, alpha, N, fill)
    return [
        _spectrum_of(_hamiltonian(p, lam, V), p, alpha, lam, tol, max_sweeps)
        for lam in lambdas
    ]

"""Trigonometric moments, their Toeplitz forms and the moment-space energy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz as _toeplitz

from .basis import to_chebyshev
from .measures import CircleMeasure

__all__ = [
    "MomentVector",
    "PSDResult",
    "OrderMismatchError",
    "moments_of",
    "toeplitz",
    "is_psd",
    "moment_energy",
]


class OrderMismatchError(ValueError):
    """Moment vector shorter than the series it is paired with."""


@dataclass(frozen=True, eq=False)
class MomentVector:
    """Moments ``nu_k = int exp(i k theta) d nu`` for ``k = 0..n``.

    Negative orders follow from ``nu_{-k} = conj(nu_k)``.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex, ndmin=1)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("need a non-empty 1-d moment sequence")
        if v[0] != 1.0:
            raise ValueError("nu_0 must equal 1")
        if np.any(np.abs(v) > 1.0 + 1e-12):
            raise ValueError("moments of a probability measure satisfy |nu_k| <= 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def order(self) -> int:
        return self.values.size - 1

    def to_dict(self) -> dict:
        return {"re": self.values.real.tolist(), "im": self.values.imag.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "MomentVector":
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
        return cls(re + 1j * im)


@dataclass(frozen=True)
class PSDResult:
    psd: bool
    min_eigenvalue: float
    witness: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.psd


def moments_of(mu: CircleMeasure, n: int) -> MomentVector:
    if n < 0:
        raise ValueError("order must be >= 0")
    k = np.arange(n + 1)
    v = np.exp(1j * np.outer(k, mu.angles)) @ mu.weights
    v[0] = 1.0
    return MomentVector(v)


def toeplitz(nu) -> np.ndarray:
    """Hermitian Toeplitz matrix with entry ``(j, l) = nu_{j-l}``.

    ``nu`` may be a :class:`MomentVector` or any sequence with ``nu_0 = 1``;
    the latter allows probing vectors that are not moments at all.
    """
    v = np.asarray(nu.values if isinstance(nu, MomentVector) else nu, dtype=complex)
    if v.ndim != 1 or v.size == 0 or v[0] != 1.0:
        raise ValueError("need a 1-d sequence starting with nu_0 = 1")
    # first column nu_0, nu_1, ...; first row nu_0, nu_{-1}, ...
    return _toeplitz(v, np.conj(v))


def is_psd(T, tol: float = 1e-9) -> PSDResult:
    """Eigenvalue test ``lambda_min(T) >= -tol``.

    On failure the eigenvector of the smallest eigenvalue is returned as a
    witness ``x`` with ``x^H T x = lambda_min < -tol``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    evals, evecs = np.linalg.eigh(np.asarray(T))
    lo = float(evals[0])
    if lo >= -tol:
        return PSDResult(True, lo)
    return PSDResult(False, lo, evecs[:, 0])


def moment_energy(f, nu: MomentVector) -> float:
    """Energy of a Chebyshev potential written in moment coordinates.

    ``T_i(cos(x - y)) = cos(i x) cos(i y) + sin(i x) sin(i y)``, so the double
    integral of ``T_i`` is ``(int cos(i t))^2 + (int sin(i t))^2 = |nu_i|^2``
    and the energy is ``c_0 + sum_i c_i |nu_i|^2``.
    """
    c = to_chebyshev(f).coeffs
    v = nu.values if isinstance(nu, MomentVector) else np.asarray(nu, dtype=complex)
    if v.size < c.size:
        raise OrderMismatchError(
            f"series of degree {c.size - 1} needs moments up to that order, got {v.size - 1}")
    m = np.abs(v[1:c.size]) ** 2
    return float(c[0] + np.dot(c[1:], m))

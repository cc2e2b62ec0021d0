"""Regular n-gon measures, coefficient sub-sums and two-point configurations.

For the uniform measure on a regular n-gon the moment ``nu_j`` is 1 when
``n | j`` and 0 otherwise, so its energy against ``sum_j c_j T_j`` is the
sub-sum ``s(n) = sum_{n | j} c_j`` (``j = 0`` included).
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass, field

import numpy as np

from .basis import critical_points, to_chebyshev
from .measures import CircleMeasure

__all__ = [
    "SubsumReport",
    "TwoPointResult",
    "ConjectureReport",
    "ngon_energy",
    "best_ngon",
    "two_point_optimum",
    "conjecture_check",
]


@dataclass(frozen=True)
class SubsumReport:
    n_values: tuple[int, ...]
    sums: tuple[float, ...]
    minimum: float
    minimizers: tuple[int, ...]
    tie: bool
    even_only: bool
    tie_tol: float

    def table_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "s(n)", "even"])
        for n, s in zip(self.n_values, self.sums):
            wr.writerow([n, repr(s), int(n % 2 == 0)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "n": list(self.n_values),
            "sums": list(self.sums),
            "minimum": self.minimum,
            "minimizers": list(self.minimizers),
            "even_minimizers": [n for n in self.minimizers if n % 2 == 0],
            "tie": self.tie,
            "even_only": self.even_only,
            "tie_tol": self.tie_tol,
            "csv": self.table_csv(),
        }


@dataclass(frozen=True)
class TwoPointResult:
    t: float
    w: float
    energy: float

    @property
    def measure(self) -> CircleMeasure:
        return CircleMeasure([0.0, float(np.arccos(self.t))], [self.w, 1.0 - self.w])

    def to_dict(self) -> dict:
        return {"t": self.t, "w": self.w, "energy": self.energy}


@dataclass(frozen=True)
class ConjectureReport:
    verdict: str
    subsums: SubsumReport
    critical_points: tuple[float, ...] = ()
    threshold: float = 1e-3
    runs: tuple[dict, ...] = ()
    max_distance: float | None = None
    classes: tuple[tuple[int, ...], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "subsums": self.subsums.to_dict(),
            "critical_points": list(self.critical_points),
            "threshold": self.threshold,
            "runs": list(self.runs),
            "max_distance": self.max_distance,
            "tie_classes": [list(c) for c in self.classes],
        }


def ngon_energy(f, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    c = to_chebyshev(f).coeffs
    return float(np.sum(c[::n]))


def best_ngon(f, n_max: int, tie_tol: float = 1e-12, even_only: bool = True) -> SubsumReport:
    """Sub-sums ``s(n)`` for ``n = 2..n_max`` and every ``n`` attaining the minimum."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    f = to_chebyshev(f)
    ns = tuple(n for n in range(2, n_max + 1) if not even_only or n % 2 == 0)
    sums = tuple(ngon_energy(f, n) for n in ns)
    lo = min(sums)
    winners = tuple(n for n, s in zip(ns, sums) if s - lo <= tie_tol)
    return SubsumReport(ns, sums, lo, winners, len(winners) > 1, even_only, tie_tol)


def two_point_optimum(f) -> TwoPointResult:
    """Best measure on at most two points.

    With masses ``w, 1 - w`` at inner product ``t`` the energy is
    ``f(1) - 2 w (1 - w) (f(1) - f(t))``, minimized by ``w = 1/2`` and
    ``t`` the global minimizer of ``f`` whenever ``f(t) < f(1)``.
    """
    f = to_chebyshev(f)
    if f.degree < 1:
        raise ValueError("two-point optimum needs degree >= 1")
    cand = np.array([-1.0, *critical_points(f), 1.0])
    vals = f(cand)
    i = int(np.argmin(vals))
    t, ft, f1 = float(cand[i]), float(vals[i]), float(f(1.0))
    if ft < f1:
        return TwoPointResult(t, 0.5, 0.5 * (f1 + ft))
    return TwoPointResult(1.0, 1.0, f1)


def _multiple_class(n: int, degree: int) -> tuple[int, ...]:
    return tuple(range(0, degree + 1, n))


def conjecture_check(f, cfg=None, *, n_max: int | None = None, even_only: bool = True,
                     tie_tol: float = 1e-12, n_atoms: tuple[int, ...] | None = None,
                     threshold: float = 1e-3) -> ConjectureReport:
    """Test the support of numerical minimizers against critical points of ``f``.

    Only runs when the minimal sub-sum is not unique. Two n-gons that see
    the same set of coefficient indices (e.g. every ``n`` above the degree,
    which all see only ``c_0``) count as one class; a tie needs two
    distinct classes. For each minimizer every off-diagonal inner product
    ``cos(theta_i - theta_j)`` is compared with the nearest critical point.
    The verdict is one of ``degenerate``, ``not applicable``, ``pass``
    or ``fail``.
    """
    from .optimize import OptimizerConfig, minimize_circle

    f = to_chebyshev(f)
    cfg = cfg or OptimizerConfig()
    n_max = n_max if n_max is not None else max(4, f.degree + 2)
    report = best_ngon(f, n_max, tie_tol, even_only)
    if f.degree < 1 or not np.any(f.coeffs[1:]):
        return ConjectureReport("degenerate", report, threshold=threshold)
    classes = tuple(sorted({_multiple_class(n, f.degree) for n in report.minimizers}))
    if len(classes) < 2:
        return ConjectureReport("not applicable", report, threshold=threshold, classes=classes)

    crit = np.array(critical_points(f))
    sizes = n_atoms or tuple(sorted({2, 4, f.degree, f.degree + 2}))
    runs = []
    worst = 0.0
    for k in sizes:
        res = minimize_circle(f, k, cfg)
        mu = res.minimizer
        i, j = np.triu_indices(mu.size, 1)
        ips = np.cos(mu.angles[i] - mu.angles[j])
        if crit.size:
            dist = np.min(np.abs(ips[:, None] - crit[None, :]), axis=1).tolist()
            worst = max([worst, *dist])
        else:
            # no critical points at all: any support pair contradicts the claim
            dist = [None] * ips.size
            worst = np.inf if ips.size else worst
        runs.append({
            "n_atoms": k,
            "energy": res.energy,
            "measure": mu.to_dict(),
            "inner_products": ips.tolist(),
            "distances": dist,
        })
    verdict = "pass" if worst <= threshold else "fail"
    return ConjectureReport(verdict, report, tuple(crit.tolist()), threshold,
                            tuple(runs), worst if np.isfinite(worst) else None, classes)

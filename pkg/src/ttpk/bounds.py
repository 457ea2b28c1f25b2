"""Lower bounds on OPT, the analyzed schedule bound, and ratio certification."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .construction import SolveResult, label_schedule
from .errors import DomainError, TTPError
from .instance import DistanceMatrix, Number, stats
from .labeling import enumerate_labelings, select_hub, shortcut
from .schedule import total_cost
from .tsp_tour import EXACT_LIMIT, Tour, christofides, exact_tour, one_tree_bound


class CertificationError(TTPError):
    """A solver output broke its cost bound or ratio guarantee."""


def _norm(x) -> Number:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class LowerBounds:
    lb_tour: Number
    lb_delta_k: Number
    lb_delta_n: Number
    lb: Number
    tour_exactness: str  # "exact" or "surrogate"
    tour_ref_length: Number


def lower_bounds(m: DistanceMatrix, k: int, limit: int = EXACT_LIMIT,
                 tour: Optional[Tour] = None) -> LowerBounds:
    """``n d(T*)``, ``2 Delta / k`` and ``4 Delta / n``.

    Beyond ``limit`` the tour term uses ``max(2/3 d(T), 1-tree)`` with T the
    Christofides tour; if T meets the 1-tree bound it is optimal and the
    bound is marked exact.
    """
    n = m.n
    delta = stats(m).delta
    if n <= limit:
        ref = exact_tour(m, limit).length
        exactness = "exact"
    else:
        t = tour if tour is not None else christofides(m)
        onetree = one_tree_bound(m)
        if t.length == onetree:
            ref, exactness = t.length, "exact"
        else:
            ref, exactness = max(Fraction(2, 3) * t.length, Fraction(onetree)), "surrogate"
    lb_tour = _norm(n * Fraction(ref))
    lb_k = _norm(Fraction(2 * delta) / k)
    lb_n = _norm(Fraction(4 * delta) / n)
    return LowerBounds(lb_tour, lb_k, lb_n, max(lb_tour, lb_k, lb_n), exactness, _norm(ref))


def analyzed_upper_bound(m: DistanceMatrix, k: int, tour: Tour) -> Number:
    """``(10/n) Delta + (2/k) Delta + (1 - 1/k) n d(T)``; the middle term is
    dropped when ``k >= n/2``."""
    if sorted(tour.order) != list(range(m.n)):
        raise DomainError("tour must span every team")
    n = m.n
    delta = Fraction(stats(m).delta)
    bound = Fraction(10, n) * delta + Fraction(k - 1, k) * n * Fraction(tour.length)
    if 2 * k < n:
        bound += Fraction(2, k) * delta
    return _norm(bound)


def ratio_limit(n: int, k: int) -> int:
    return 4 if 2 * k >= n else 5


@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    lb_tour: Number
    lb_delta_k: Number
    lb_delta_n: Number
    lb: Number
    ub_analyzed: Number
    realized_cost: Optional[Number]
    certified_ratio: Optional[Fraction]
    tour_exactness: str
    tour_length: Number

    @property
    def ratio_limit(self) -> int:
        return ratio_limit(self.n, self.k)

    @property
    def ub_ok(self) -> bool:
        return self.realized_cost is None or self.realized_cost <= self.ub_analyzed

    @property
    def ratio_ok(self) -> bool:
        if self.certified_ratio is None:
            return True
        return self.certified_ratio <= self.ratio_limit

    @property
    def ok(self) -> bool:
        return self.ub_ok and self.ratio_ok

    def to_json(self) -> dict:
        def num(x):
            return None if x is None else (x if isinstance(x, int) else str(x))

        out = {
            "n": self.n,
            "k": self.k,
            "lb_tour": num(self.lb_tour),
            "lb_delta_k": num(self.lb_delta_k),
            "lb_delta_n": num(self.lb_delta_n),
            "lb": num(self.lb),
            "ub_analyzed": num(self.ub_analyzed),
            "tour_length": num(self.tour_length),
            "tour_exactness": self.tour_exactness,
            "certification": "exact" if self.tour_exactness == "exact" else "surrogate-certified",
        }
        if self.realized_cost is not None:
            out.update(
                realized_cost=num(self.realized_cost),
                certified_ratio=num(self.certified_ratio),
                certified_ratio_float=None if self.certified_ratio is None
                else float(self.certified_ratio),
                ratio_limit=self.ratio_limit,
                ub_ok=self.ub_ok,
                ratio_ok=self.ratio_ok,
            )
        return out


def bounds(m: DistanceMatrix, k: int, tour: Optional[Tour] = None,
           limit: int = EXACT_LIMIT) -> BoundsReport:
    """Bounds without a schedule: lower bounds and the analyzed bound for ``tour``."""
    t = tour if tour is not None else christofides(m)
    low = lower_bounds(m, k, limit, t)
    return BoundsReport(m.n, k, low.lb_tour, low.lb_delta_k, low.lb_delta_n, low.lb,
                        analyzed_upper_bound(m, k, t), None, None, low.tour_exactness, t.length)


def certify(m: DistanceMatrix, k: int, result: SolveResult, limit: int = EXACT_LIMIT,
            strict: bool = False) -> BoundsReport:
    """Full report for a solver output; ``strict`` raises on a broken guarantee."""
    if result.schedule.n != m.n or result.k != k:
        raise DomainError("solver output was computed for a different instance or k")
    realized = total_cost(result.schedule, m)
    if realized != result.cost:
        raise DomainError("solver output cost does not match this instance")
    base = bounds(m, k, result.tour, limit)
    # lb == 0 forces an all-zero metric, hence zero cost.
    ratio = Fraction(0) if base.lb == 0 else Fraction(realized) / Fraction(base.lb)
    report = BoundsReport(base.n, k, base.lb_tour, base.lb_delta_k, base.lb_delta_n, base.lb,
                          base.ub_analyzed, realized, ratio, base.tour_exactness,
                          base.tour_length)
    if strict and not report.ok:
        raise CertificationError(
            f"certificate failed: cost={realized}, ub={report.ub_analyzed}, ratio={ratio}"
        )
    return report


# ------------------------------------------------- labeling expectations

def labeling_position_totals(m: DistanceMatrix, k: int, l: int,
                             tour: Optional[Tour] = None) -> np.ndarray:
    """Scaled ``sum over all n-1 labelings of d_i(j)`` as an array ``[day, position]``.

    Dividing by ``n - 1`` gives the mean over uniformly random labelings.
    """
    t = tour if tour is not None else christofides(m)
    hub = select_hub(m, t)
    labelings = enumerate_labelings(shortcut(t, hub), hub)
    days = np.array(label_schedule(m.n, k, l), dtype=np.int64)  # [day, pos, (away, home)]
    total = np.zeros(days.shape[:2], dtype=np.int64)
    for lab in labelings:
        teams = lab.teams_by_label()
        total += m.scaled[teams[days[..., 0]], teams[days[..., 1]]]
    return total

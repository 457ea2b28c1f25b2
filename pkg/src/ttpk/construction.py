"""The rotation-scheme construction, its flawed predecessor, and the derandomized solver.

Everything up to the final team mapping happens in label space: label ``n``
is the hub, labels ``1..n-1`` run along the reduced cycle. Day pairings come
from the closed form ``phi(x) = x*m mod (n-1)`` (0 read as n-1), which is the
one-step rotation of the reduced cycle written out directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .errors import ConstructionDefect, DomainError
from .instance import DistanceMatrix, Number, check_team_count
from .labeling import Labeling, candidate_ls, enumerate_labelings, select_hub, shortcut
from .schedule import Game, Schedule, total_cost, validate
from .tsp_tour import Tour, christofides


@dataclass(frozen=True)
class BlockLayout:
    m: int
    k: int
    l: int
    b: int
    widths: tuple[int, ...]
    rule1_reversal: bool

    def block_of(self) -> list[int]:
        """Block number (1-based) of each position 1..m, as a 0-indexed list."""
        out = []
        for blk, w in enumerate(self.widths, start=1):
            out.extend([blk] * w)
        return out

    def to_json(self) -> dict:
        return {"m": self.m, "k": self.k, "l": self.l, "b": self.b,
                "widths": list(self.widths), "rule1_reversal": self.rule1_reversal}


def block_layout(m: int, k: int, l: int) -> BlockLayout:
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    if not 1 <= l <= min(k, m - 1):
        raise DomainError(f"l must lie in 1..{min(k, m - 1)}, got {l}")
    rest = m - l - 1
    b = -(-rest // k) + 2
    if b == 2:
        widths = (1, l)
    else:
        widths = (1, rest - (b - 3) * k) + (k,) * (b - 3) + (l,)
    # A full-width second block always needs its leftmost edge split off,
    # the two-block layout included (n=2k+2 with l=k).
    return BlockLayout(m, k, l, b, widths, widths[1] == k)


def _phi(x: int, m: int, q: int) -> int:
    return (x * m) % q or q


def day_pairing(n: int, j: int) -> list[tuple[int, int]]:
    """Label pairs of day ``j`` (1..n-1), left to right.

    Position 1 is ``(n, opponent)``; position i >= 2 is ``(upper, lower)``.
    """
    check_team_count(n)
    q = n - 1
    if not 1 <= j <= q:
        raise DomainError(f"day must lie in 1..{q}, got {j}")
    m = n // 2
    return [(n, _phi(j, m, q))] + [(_phi(j + i - 1, m, q), _phi(j - i + 1, m, q))
                                   for i in range(2, m + 1)]


@dataclass(frozen=True)
class DirectionPlan:
    """``first_away[j-1, i-1]``: on season-1 day j, the hub (i=1) or upper team is away."""

    first_away: np.ndarray
    r: int
    rule2_day1_reversal: bool


def direction_plan(n: int, k: int, layout: BlockLayout, flawed: bool = False) -> DirectionPlan:
    q = n - 1
    m = n // 2
    if not 2 <= k < n:
        raise DomainError(f"k must satisfy 2 <= k < n (n={n}), got {k}")
    plan = np.empty((q, m), dtype=bool)
    blocks = layout.block_of()
    for i in range(1, m):
        plan[:, i] = blocks[i] % 2 == 0
    if layout.rule1_reversal:
        plan[:, 1] = ~plan[:, 1]
    plan[:, 0] = (np.arange(q) // k) % 2 == 0
    r = q % (2 * k)
    day1 = (r <= k < q) and not flawed
    if day1:
        plan[0, 0] = ~plan[0, 0]
    plan.setflags(write=False)
    return DirectionPlan(plan, r, day1)


@lru_cache(maxsize=4096)
def label_schedule(n: int, k: int, l: int, flawed: bool = False) -> tuple:
    """Both seasons as ``(away_label, home_label)`` pairs per day and position."""
    m = n // 2
    layout = block_layout(m, k, l)
    plan = direction_plan(n, k, layout, flawed).first_away
    season1 = []
    for j in range(1, n):
        day = []
        for i, (a, b) in enumerate(day_pairing(n, j)):
            day.append((a, b) if plan[j - 1, i] else (b, a))
        season1.append(tuple(day))
    order = [n - 2, n - 1] + list(range(1, n - 2))
    season2 = [tuple((h, a) for a, h in season1[j - 1]) for j in order]
    return tuple(season1 + season2)


@lru_cache(maxsize=4096)
def label_moves(n: int, k: int, l: int, flawed: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Every nonstationary move of every label, as parallel (src, dst) label arrays."""
    days = label_schedule(n, k, l, flawed)
    where = np.empty((n + 1, len(days) + 2), dtype=np.int64)
    where[:, 0] = where[:, -1] = np.arange(n + 1)
    for j, day in enumerate(days, start=1):
        for a, h in day:
            where[a, j] = h
            where[h, j] = h
    src = where[1:, :-1].ravel()
    dst = where[1:, 1:].ravel()
    keep = src != dst
    src, dst = src[keep], dst[keep]
    src.setflags(write=False)
    dst.setflags(write=False)
    return src, dst


def _check_params(m: DistanceMatrix, labeling: Labeling, k: int, l: int) -> None:
    if labeling.n != m.n:
        raise DomainError(f"labeling covers {labeling.n} teams but instance has {m.n}")
    allowed = candidate_ls(m.n, k)
    if l not in allowed:
        raise DomainError(f"l={l} not a candidate for n={m.n}, k={k}; expected one of {allowed}")


def _to_teams(labeling: Labeling, days) -> Schedule:
    t = labeling.teams_by_label()
    return Schedule(labeling.n, tuple(tuple(Game(int(t[a]), int(t[h])) for a, h in day)
                                      for day in days))


def cons(m: DistanceMatrix, labeling: Labeling, k: int, l: int) -> Schedule:
    """Feasible TTP-k schedule for the given labeling and last-block width."""
    _check_params(m, labeling, k, l)
    s = _to_teams(labeling, label_schedule(m.n, k, l))
    report = validate(s, k)
    if not report.ok:
        raise ConstructionDefect(f"construction infeasible for n={m.n}, k={k}, l={l}")
    return s


def flawed_cons(m: DistanceMatrix, labeling: Labeling, k: int, l: int) -> Schedule:
    """The prior construction: no day-1 reversal of the hub edge. May be infeasible."""
    _check_params(m, labeling, k, l)
    return _to_teams(labeling, label_schedule(m.n, k, l, flawed=True))


@dataclass(frozen=True)
class Candidate:
    start: int
    l: int
    cost: Number


@dataclass
class SolveResult:
    schedule: Schedule
    k: int
    labeling: Labeling
    l: int
    layout: BlockLayout
    cost: Number
    tour: Tour
    candidates: list[Candidate] = field(default_factory=list)

    def provenance(self) -> dict:
        return {
            "labeling": self.labeling.to_json(),
            "l": self.l,
            "layout": self.layout.to_json(),
            "tour": self.tour.to_json(),
            "flags": {
                "rule1_reversal": self.layout.rule1_reversal,
                "rule2_day1_reversal": direction_plan(
                    self.schedule.n, self.k, self.layout).rule2_day1_reversal,
                "kernel_backend": kernels.BACKEND,
            },
        }


def solve(m: DistanceMatrix, k: int, tour: Optional[Tour] = None) -> SolveResult:
    """Best schedule over all n-1 rotation labelings and every candidate l.

    Ties go to the lowest labeling start index, then the lowest l.
    """
    n = m.n
    ls = candidate_ls(n, k)
    if tour is None:
        tour = christofides(m)
    hub = select_hub(m, tour)
    reduced = shortcut(tour, hub)
    red = np.asarray(reduced, dtype=np.int64)
    scored = []
    for l in ls:
        src, dst = label_moves(n, k, l)
        costs = kernels.rotation_costs(m.scaled, red, hub, src, dst)
        scored.extend((int(c), s, l) for s, c in enumerate(costs))
    best_cost, best_s, best_l = min(scored)
    labeling = enumerate_labelings(reduced, hub)[best_s]
    schedule = cons(m, labeling, k, best_l)
    realized = total_cost(schedule, m)
    if realized != m.value(best_cost):
        raise ConstructionDefect("kernel cost disagrees with the schedule's travel cost")
    candidates = [Candidate(s, l, m.value(c)) for c, s, l in sorted(scored, key=lambda x: (x[1], x[2]))]
    return SolveResult(schedule, k, labeling, best_l, block_layout(n // 2, k, best_l),
                       realized, tour, candidates)


# ------------------------------------------------------ move decomposition

@dataclass
class GapMoves:
    home_moves: int = 0
    away_moves: int = 0
    home_cost: int = 0
    away_cost: int = 0


@dataclass
class MoveDecomposition:
    """Moves under the analysis assumptions, per season and per gap.

    Season gap 0 leaves home (day 0 or the inserted home day), gap i sits
    between the season's days i and i+1, gap n-1 returns home. Costs are in
    the instance's scaled integer units; ``total`` is exact.
    """

    seasons: tuple[list[GapMoves], list[GapMoves]]
    total: Number

    def middle_gaps(self, season: int) -> list[GapMoves]:
        return self.seasons[season][1:-1]


def move_decomposition(s: Schedule, m: DistanceMatrix, labeling: Labeling,
                       layout: BlockLayout) -> MoveDecomposition:
    """Cost with a home day between seasons and the hub and its opponent sent
    home right before and after each meeting, split into home- and away-moves."""
    n = s.n
    k, l = layout.k, layout.l
    try:
        expected = cons(m, labeling, k, l)
    except DomainError:
        raise DomainError("schedule parameters do not match any construction output") from None
    if expected != s:
        raise DomainError("schedule is not the construction output for this labeling and layout")

    D = m.scaled
    q = n - 1
    hub = labeling.hub
    seasons = ([GapMoves() for _ in range(n)], [GapMoves() for _ in range(n)])
    total = 0
    for t in range(n):
        # (venue, season, gap) stops; gap is the gap that the leg *into* this stop belongs to.
        stops = [(t, 0, 0)]
        for j, day in enumerate(s.days, start=1):
            season = 0 if j <= q else 1
            local = j if season == 0 else j - q
            gap_in = local - 1
            if j == q + 1:
                stops.append((t, 0, q))  # home day closes season 1
            g = next(g for g in day if t in g)
            meets_hub = hub in g
            if meets_hub:
                stops.append((t, season, gap_in))
            stops.append((g.home, season, gap_in))
            if meets_hub:
                stops.append((t, season, local))
        stops.append((t, 1, q))
        for (v0, _, _), (v1, season, gap) in zip(stops, stops[1:]):
            if v0 == v1:
                continue
            cost = int(D[v0, v1])
            total += cost
            cell = seasons[season][gap]
            if v0 != t and v1 != t:
                cell.away_moves += 1
                cell.away_cost += cost
            else:
                cell.home_moves += 1
                cell.home_cost += cost
    return MoveDecomposition(seasons, m.value(total))


def hub_pattern(s: Schedule, hub: int) -> str:
    """Home/away string of ``hub`` over all days."""
    return "".join("H" if h else "A" for h in s.home_away()[hub])

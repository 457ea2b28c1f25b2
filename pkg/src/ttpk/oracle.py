"""Exact TTP-k at desk scale (n = 4 and 6) by depth-first search.

Days are filled chronologically; within a day the lowest free team is paired
first. Nodes are pruned on the streak cap, on no-repeat, and on
``cost so far + sum of per-team lower bounds >= incumbent``. The per-team bound
is the cheapest way to still visit every remaining away venue in trips of at
most ``k`` games, which relaxes every interaction between teams.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import kernels
from ._pykernels import NO_INCUMBENT, SENT, TTPSearch
from .errors import CapabilityError, DomainError
from .instance import DistanceMatrix, Number
from .schedule import Schedule, total_cost

SUPPORTED = (4, 6)


@dataclass
class OracleResult:
    status: str  # "optimal", "infeasible" or "timeout"
    schedule: Optional[Schedule]
    cost: Optional[Number]
    lower_bound: Number
    nodes: int
    elapsed: float

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _subsets(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def team_bound_tables(D: np.ndarray, t: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Trip-decomposition lower bounds on team ``t``'s remaining travel.

    ``F[r, S]``: cheapest way, starting at home, to visit venue set S in trips
    of at most ``k`` venues using at least ``r`` trips.
    ``G[c, v, r, S]``: same, but currently away at v after c straight away
    games, with the current trip still open. Unreachable entries hold ``SENT``.
    """
    n = len(D)
    D = [[int(x) for x in row] for row in D]
    INF = SENT
    others = [u for u in range(n) if u != t]
    full = sum(1 << u for u in others)
    cap = min(k, n - 1)
    size = 1 << n
    masks = sorted(_subsets(full), key=_popcount)
    path = [[INF] * size for _ in range(n)]
    for v in range(n):
        path[v][0] = D[v][t]
    for S in masks:
        if S == 0:
            continue
        for v in range(n):
            if (S >> v) & 1:
                continue
            path[v][S] = min(D[v][u] + path[u][S ^ (1 << u)] for u in others if (S >> u) & 1)
    trips = n  # r ranges over 0..n-1
    F = [[INF] * size for _ in range(trips)]
    F[0][0] = 0
    for r in range(trips):
        for S in masks:
            if S == 0:
                continue
            low = S & -S
            rest = S ^ low
            best = INF
            for T in _subsets(rest):
                if _popcount(T) + 1 <= cap:
                    best = min(best, path[t][T | low] + F[max(r - 1, 0)][S ^ (T | low)])
            F[r][S] = min(best, INF)
    G = np.full((cap + 1, n, trips, size), SENT, dtype=np.int64)
    for c in range(1, cap + 1):
        for v in others:
            for r in range(trips):
                for S in masks:
                    if (S >> v) & 1:
                        continue
                    best = INF
                    for T in _subsets(S):
                        if _popcount(T) <= cap - c:
                            best = min(best, path[v][T] + F[r][S ^ T])
                    G[c, v, r, S] = min(best, INF)
    return np.array(F, dtype=np.int64), G


def _tables(m: DistanceMatrix, k: int) -> tuple[np.ndarray, np.ndarray]:
    per_team = [team_bound_tables(m.scaled, t, k) for t in range(m.n)]
    return (np.stack([f for f, _ in per_team]), np.stack([g for _, g in per_team]))


def exact_ttp(m: DistanceMatrix, k: int, budget: float = 60.0,
              incumbent: Optional[Schedule] = None) -> OracleResult:
    """Provably optimal TTP-k schedule, or the best incumbent when ``budget`` runs out.

    ``incumbent`` (any feasible schedule) only seeds the pruning bound.
    """
    if m.n not in SUPPORTED:
        raise CapabilityError(f"exact search supports n in {SUPPORTED}, got n={m.n}")
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    start = time.monotonic()
    F, G = _tables(m, k)
    root = int(sum(F[t, 0, ((1 << m.n) - 1) ^ (1 << t)] for t in range(m.n)))
    best, best_days = NO_INCUMBENT, None
    if incumbent is not None:
        best = int(total_cost(incumbent, m) * m.scale)
        best_days = incumbent.days
    timed_out, best, days, nodes = kernels.ttp_search(m.scaled, k, F, G, best,
                                                      start + budget)
    if days is not None:
        best_days = days
    elapsed = time.monotonic() - start
    root_value = m.value(0) if root >= SENT else m.value(root)
    if best_days is None:
        if timed_out:
            return OracleResult("timeout", None, None, root_value, nodes, elapsed)
        return OracleResult("infeasible", None, None, m.value(0), nodes, elapsed)
    schedule = Schedule.from_pairs(m.n, best_days)
    cost = m.value(int(best))
    if timed_out:
        return OracleResult("timeout", schedule, cost, root_value, nodes, elapsed)
    return OracleResult("optimal", schedule, cost, cost, nodes, elapsed)


def enumerate_schedules(n: int, k: Optional[int] = None, no_repeat: bool = True
                        ) -> Iterator[Schedule]:
    """Every double round-robin on ``n`` teams meeting the chosen constraints.

    ``k=None`` drops the streak cap. Only sensible for n = 4.
    """
    if n != 4:
        raise CapabilityError(f"schedule enumeration supports n=4 only, got n={n}")
    D = np.zeros((n, n), dtype=np.int64)
    search = TTPSearch(D, k if k is not None else 2 * n, no_repeat=no_repeat)
    for _ in search.run():
        yield Schedule.from_pairs(n, search.days)


def exhaustive_schedule_count(n: int, k: int) -> int:
    """Number of feasible TTP-k schedules on ``n = 4`` teams."""
    if n != 4:
        raise CapabilityError(f"exhaustive counting supports n=4 only, got n={n}")
    return sum(1 for _ in enumerate_schedules(n, k))

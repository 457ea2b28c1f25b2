"""Schedule type, TTP-k feasibility validator, travel accounting and serialization.

Teams are 0-based internally and 1-based in JSON/CSV. Day numbers in reports
are 1-based. Position ``i`` within a day (1-based in the public helpers) is
the left-to-right game slot of the rotation layout.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, StructuralError
from .instance import DistanceMatrix, Number


class Game(NamedTuple):
    away: int
    home: int


@dataclass(frozen=True)
class Schedule:
    n: int
    days: tuple[tuple[Game, ...], ...]

    @classmethod
    def from_pairs(cls, n: int, days: Sequence[Sequence[Sequence[int]]]) -> "Schedule":
        return cls(n, tuple(tuple(Game(int(a), int(h)) for a, h in day) for day in days))

    @property
    def m(self) -> int:
        return self.n // 2

    def venue_matrix(self) -> np.ndarray:
        """``V[t, j]`` is where team t is on day j (0 and 2n-1 are home)."""
        n = self.n
        V = np.empty((n, 2 * n), dtype=np.int64)
        V[:, 0] = V[:, -1] = np.arange(n)
        for j, day in enumerate(self.days, start=1):
            for g in day:
                V[g.away, j] = g.home
                V[g.home, j] = g.home
        return V

    def home_away(self) -> np.ndarray:
        """Boolean ``(n, 2(n-1))`` array, True where the team plays at home."""
        V = self.venue_matrix()[:, 1:-1]
        return V == np.arange(self.n)[:, None]


def check_structure(s: Schedule) -> None:
    n = s.n
    if n < 4 or n % 2:
        raise StructuralError(f"team count must be even and >= 4, got {n}")
    if len(s.days) != 2 * (n - 1):
        raise StructuralError(f"expected {2 * (n - 1)} days, got {len(s.days)}")
    for j, day in enumerate(s.days, start=1):
        if len(day) != n // 2:
            raise StructuralError(f"day {j}: expected {n // 2} games, got {len(day)}")
        seen = [t for g in day for t in g]
        if any(not 0 <= t < n for t in seen):
            raise StructuralError(f"day {j}: team id out of range")
        if len(set(seen)) != n:
            raise StructuralError(f"day {j}: games do not form a perfect matching")


class Streak(NamedTuple):
    team: int
    first_day: int
    last_day: int
    kind: str  # "H" or "A"

    @property
    def length(self) -> int:
        return self.last_day - self.first_day + 1


@dataclass
class ValidationReport:
    k: int
    missing: list[tuple[int, int]] = field(default_factory=list)
    duplicated: list[tuple[int, int]] = field(default_factory=list)
    repeats: list[tuple[int, int, int]] = field(default_factory=list)
    streaks: list[Streak] = field(default_factory=list)

    @property
    def double_round_robin(self) -> bool:
        return not (self.missing or self.duplicated)

    @property
    def no_repeat(self) -> bool:
        return not self.repeats

    @property
    def bounded(self) -> bool:
        return not self.streaks

    @property
    def ok(self) -> bool:
        return self.double_round_robin and self.no_repeat and self.bounded

    def streak_teams(self) -> set[int]:
        return {st.team for st in self.streaks}

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "feasible": self.ok,
            "double_round_robin": {
                "ok": self.double_round_robin,
                "missing": [{"away": a + 1, "home": h + 1} for a, h in self.missing],
                "duplicated": [{"away": a + 1, "home": h + 1} for a, h in self.duplicated],
            },
            "no_repeat": {
                "ok": self.no_repeat,
                "violations": [{"day": d, "teams": [a + 1, b + 1]} for d, a, b in self.repeats],
            },
            "bounded_by_k": {
                "ok": self.bounded,
                "violations": [
                    {"team": st.team + 1, "first_day": st.first_day,
                     "last_day": st.last_day, "kind": st.kind, "length": st.length}
                    for st in self.streaks
                ],
            },
        }


def validate(s: Schedule, k: int) -> ValidationReport:
    """Check double round-robin, no-repeat and bounded-by-k; list every violation."""
    check_structure(s)
    n = s.n
    report = ValidationReport(k)

    count = np.zeros((n, n), dtype=np.int64)
    for day in s.days:
        for g in day:
            count[g.away, g.home] += 1
    for a in range(n):
        for h in range(n):
            if a == h:
                continue
            if count[a, h] == 0:
                report.missing.append((a, h))
            elif count[a, h] > 1:
                report.duplicated.append((a, h))

    prev: set[frozenset] = set()
    for j, day in enumerate(s.days, start=1):
        pairs = {frozenset(g) for g in day}
        for g in day:
            if frozenset(g) in prev:
                a, b = sorted(g)
                report.repeats.append((j, a, b))
        prev = pairs

    ha = s.home_away()
    for t in range(n):
        start = 0
        for j in range(1, len(s.days) + 1):
            if j == len(s.days) or ha[t, j] != ha[t, start]:
                if j - start > k:
                    report.streaks.append(Streak(t, start + 1, j, "H" if ha[t, start] else "A"))
                start = j
    return report


@dataclass(frozen=True)
class Itinerary:
    team: int
    venues: tuple[int, ...]


def itineraries(s: Schedule, m: DistanceMatrix) -> list[Itinerary]:
    V = s.venue_matrix()
    return [Itinerary(t, tuple(int(v) for v in V[t])) for t in range(s.n)]


def itinerary_length(it: Itinerary, m: DistanceMatrix) -> Number:
    v = it.venues
    return m.value(int(sum(m.scaled[v[i], v[i + 1]] for i in range(len(v) - 1))))


def team_costs_scaled(s: Schedule, m: DistanceMatrix) -> np.ndarray:
    V = s.venue_matrix()
    return m.scaled[V[:, :-1], V[:, 1:]].sum(axis=1)


def total_cost(s: Schedule, m: DistanceMatrix) -> Number:
    """Total travel of all teams, starting and ending at home."""
    if s.n != m.n:
        raise DomainError(f"schedule has {s.n} teams but instance has {m.n}")
    return m.value(int(team_costs_scaled(s, m).sum()))


def position_sum(s: Schedule, m: DistanceMatrix, i: int) -> Number:
    """Sum over all days of the distance spanned by the game in position ``i`` (1-based)."""
    if not 1 <= i <= s.m:
        raise DomainError(f"position must lie in 1..{s.m}, got {i}")
    D = m.scaled
    return m.value(int(sum(D[day[i - 1].away, day[i - 1].home] for day in s.days)))


# ---------------------------------------------------------------- I/O

def to_json(s: Schedule, k: int | None = None) -> dict:
    return {
        "n": s.n,
        "k": k,
        "days": [[{"away": g.away + 1, "home": g.home + 1} for g in day] for day in s.days],
    }


def from_json(obj: dict) -> Schedule:
    try:
        n = int(obj["n"])
        days = tuple(
            tuple(Game(int(g["away"]) - 1, int(g["home"]) - 1) for g in day)
            for day in obj["days"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed schedule JSON: {exc}") from None
    return Schedule(n, days)


def itinerary_csv(s: Schedule, m: DistanceMatrix) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["team", "day", "venue"])
    for it in itineraries(s, m):
        for day, venue in enumerate(it.venues):
            w.writerow([it.team + 1, day, venue + 1])
    return out.getvalue()

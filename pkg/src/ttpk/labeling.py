"""Hub selection, the reduced cycle, and the rotation labelings the solver enumerates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError
from .instance import DistanceMatrix, check_team_count
from .tsp_tour import Tour


@dataclass(frozen=True)
class Labeling:
    """Team labels: ``order[x-1]`` carries label ``x`` for x in 1..n-1, ``hub`` carries n.

    ``start`` is the index in the reduced cycle of the team labeled 1.
    """

    hub: int
    order: tuple[int, ...]
    start: int = 0

    @property
    def n(self) -> int:
        return len(self.order) + 1

    def team(self, label: int) -> int:
        return self.hub if label == self.n else self.order[label - 1]

    @property
    def sigma(self) -> dict[int, int]:
        out = {t: x + 1 for x, t in enumerate(self.order)}
        out[self.hub] = self.n
        return out

    @property
    def tprime_order(self) -> tuple[int, ...]:
        return tuple(range(1, self.n))

    def teams_by_label(self) -> np.ndarray:
        """Array ``a`` with ``a[x]`` the team labeled x; index 0 unused."""
        return np.array([-1, *self.order, self.hub], dtype=np.int64)

    def to_json(self) -> dict:
        return {"hub": self.hub + 1, "order": [t + 1 for t in self.order]}


def select_hub(m: DistanceMatrix, t: Optional[Tour] = None) -> int:
    """Team with the smallest incident distance sum; lowest index on ties."""
    return int(np.argmin(m.scaled.sum(axis=1)))


def shortcut(t: Union[Tour, Sequence[int]], hub: int) -> tuple[int, ...]:
    order = t.order if isinstance(t, Tour) else tuple(t)
    if hub not in order:
        raise DomainError(f"hub {hub} does not appear in the tour")
    return tuple(v for v in order if v != hub)


def enumerate_labelings(reduced: Sequence[int], hub: int) -> list[Labeling]:
    reduced = tuple(reduced)
    q = len(reduced)
    return [Labeling(hub, reduced[s:] + reduced[:s], s) for s in range(q)]


def candidate_ls(n: int, k: int) -> list[int]:
    check_team_count(n)
    if not 2 <= k < n:
        raise DomainError(f"k must satisfy 2 <= k < n (n={n}), got {k}")
    if k < n // 2:
        return list(range(1, k + 1))
    return [n // 2 - 1]

"""Numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the compiled versions are tested against.
"""
import time

import numpy as np

INF = np.int64(2**62)


def rotation_costs(D, reduced, hub, src, dst):
    """Travel cost of one label-level move list under every rotation labeling.

    Rotation ``s`` gives label ``x`` (1..n-1) to ``reduced[(s + x - 1) % (n-1)]``
    and label ``n`` to ``hub``. ``src``/``dst`` hold labels 1..n.
    """
    reduced = np.asarray(reduced, dtype=np.int64)
    q = reduced.shape[0]
    lut = np.empty((q, q + 2), dtype=np.int64)
    lut[:, 0] = -1
    for s in range(q):
        lut[s, 1:q + 1] = np.roll(reduced, -s)
    lut[:, q + 1] = hub
    return D[lut[:, src], lut[:, dst]].sum(axis=1)


def held_karp(D):
    """Exact shortest Hamiltonian cycle through vertex 0. Returns (length, order)."""
    n = D.shape[0]
    if n == 1:
        return 0, [0]
    q = n - 1
    size = 1 << q
    dp = np.full((size, q), INF, dtype=np.int64)
    parent = np.full((size, q), -1, dtype=np.int64)
    for j in range(q):
        dp[1 << j, j] = D[0, j + 1]
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for b in range(q):
        pop += (masks >> b) & 1
    inner = D[1:, 1:]
    for layer in range(2, q + 1):
        layer_masks = masks[pop == layer]
        for j in range(q):
            sel = layer_masks[(layer_masks >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            cand = dp[prev] + inner[:, j][None, :]
            best = np.argmin(cand, axis=1)
            dp[sel, j] = cand[np.arange(len(sel)), best]
            parent[sel, j] = best
    full = size - 1
    closing = dp[full] + D[1:, 0]
    last = int(np.argmin(closing))
    length = int(closing[last])
    order = []
    mask, j = full, last
    while j >= 0:
        order.append(j + 1)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    order.append(0)
    order.reverse()
    return length, order


# ------------------------------------------------------------ TTP search

SENT = 2**50  # "unreachable" marker inside bound tables
NO_INCUMBENT = 2**62


class SearchTimeout(Exception):
    pass


def _popcount(x):
    return bin(x).count("1")


class TTPSearch:
    """Chronological DFS over days; pairs the lowest free team first.

    With ``F``/``G`` bound tables the search prunes on
    ``cost + added + sum(team bounds) >= best``; without them it visits every
    schedule satisfying the streak cap and (optionally) no-repeat.
    """

    def __init__(self, D, k, F=None, G=None, no_repeat=True, deadline=None):
        self.D = [list(map(int, row)) for row in D]
        self.n = n = len(self.D)
        self.k = k
        self.use_cost = F is not None
        self.F = F.tolist() if F is not None else None
        self.G = G.tolist() if G is not None else None
        self.cap = min(k, n - 1)
        self.trips = len(self.F[0]) if F is not None else 0
        self.no_repeat = no_repeat
        self.deadline = deadline
        self.days_total = 2 * (n - 1)
        self.loc = list(range(n))
        self.streak = [0] * n
        self.last = [-1] * n
        self.away_left = [sum(1 << u for u in range(n) if u != t) for t in range(n)]
        self.home_left = list(self.away_left)
        self.days = []
        self.nodes = 0
        self.best = NO_INCUMBENT
        self.best_days = None
        self.lbs = [self.team_lb(t) for t in range(n)]

    def team_lb(self, t):
        a = _popcount(self.away_left[t])
        h = _popcount(self.home_left[t])
        k, s = self.k, self.streak[t]
        if s < 0:
            if a > (k + s) + k * h or h > k * (a + 1):
                return SENT
        elif s > 0:
            if h > (k - s) + k * a or a > k * (h + 1):
                return SENT
        elif a > k * (h + 1) or h > k * (a + 1):
            return SENT
        if not self.use_cost:
            return 0
        top = self.trips - 1
        if self.loc[t] == t:
            spill = h - (k - max(s, 0))
            r = min(-(-spill // k) if spill > 0 else 0, top)
            return self.F[t][r][self.away_left[t]]
        r = min(max(0, -(-h // k) - 1), top)
        return self.G[t][min(-s, self.cap)][self.loc[t]][r][self.away_left[t]]

    def _play(self, a, h):
        saved = (self.loc[a], self.loc[h], self.streak[a], self.streak[h],
                 self.lbs[a], self.lbs[h])
        self.loc[a] = h
        self.loc[h] = h
        sa = self.streak[a]
        self.streak[a] = sa - 1 if sa < 0 else -1
        sh = self.streak[h]
        self.streak[h] = sh + 1 if sh > 0 else 1
        self.away_left[a] ^= 1 << h
        self.home_left[h] ^= 1 << a
        self.lbs[a] = self.team_lb(a)
        self.lbs[h] = self.team_lb(h)
        return saved

    def _unplay(self, a, h, saved):
        self.loc[a], self.loc[h], self.streak[a], self.streak[h], self.lbs[a], self.lbs[h] = saved
        self.away_left[a] ^= 1 << h
        self.home_left[h] ^= 1 << a

    def _options(self, t, free):
        D, k = self.D, self.k
        out = []
        for u in range(t + 1, self.n):
            if not (free >> u) & 1:
                continue
            if self.no_repeat and self.last[t] == u:
                continue
            for a, h in ((t, u), (u, t)):
                if not (self.away_left[a] >> h) & 1:
                    continue
                if self.streak[a] <= -k or self.streak[h] >= k:
                    continue
                out.append((D[self.loc[a]][h] + D[self.loc[h]][h], a, h))
        if self.use_cost:
            out.sort()
        return out

    def run(self, cost=0, free=None, today=None):
        """Generator yielding at each complete schedule (``self.days``, ``self.final_cost``)."""
        if free is None:
            free, today = (1 << self.n) - 1, []
        self.nodes += 1
        if self.deadline is not None and self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise SearchTimeout
        if free == 0:
            self.days.append(today)
            prev_last = self.last
            self.last = [0] * self.n
            for a, h in today:
                self.last[a] = h
                self.last[h] = a
            if len(self.days) == self.days_total:
                self.final_cost = cost + sum(self.D[self.loc[t]][t] for t in range(self.n))
                yield None
            else:
                yield from self.run(cost, (1 << self.n) - 1, [])
            self.last = prev_last
            self.days.pop()
            return
        t = (free & -free).bit_length() - 1
        for added, a, h in self._options(t, free):
            saved = self._play(a, h)
            lbs = self.lbs
            if not self.use_cost or (lbs[a] < SENT and lbs[h] < SENT
                                     and cost + added + sum(lbs) < self.best):
                today.append((a, h))
                yield from self.run(cost + added, free & ~(1 << a) & ~(1 << h), today)
                today.pop()
            self._unplay(a, h, saved)


def ttp_search(D, k, F, G, best, deadline):
    """Branch and bound for the optimum. Returns (timed_out, best, days or None, nodes)."""
    search = TTPSearch(D, k, F, G, deadline=deadline)
    search.best = best
    timed_out = False
    try:
        for _ in search.run():
            if search.final_cost < search.best:
                search.best = search.final_cost
                search.best_days = [list(day) for day in search.days]
    except SearchTimeout:
        timed_out = True
    return timed_out, search.best, search.best_days, search.nodes

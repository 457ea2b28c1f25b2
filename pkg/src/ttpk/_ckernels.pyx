# cython: language_level=3
"""Compiled versions of the kernels in ``_pykernels``; same signatures and tie rules."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

cdef int64_t INF = 2**62


def rotation_costs(const int64_t[:, ::1] D, reduced, int64_t hub, src, dst):
    cdef const int64_t[::1] red = np.ascontiguousarray(reduced, dtype=np.int64)
    cdef const int64_t[::1] a = np.ascontiguousarray(src, dtype=np.int64)
    cdef const int64_t[::1] b = np.ascontiguousarray(dst, dtype=np.int64)
    cdef Py_ssize_t q = red.shape[0]
    cdef Py_ssize_t nmoves = a.shape[0]
    cdef int64_t[::1] lut = np.empty(q + 2, dtype=np.int64)
    out = np.zeros(q, dtype=np.int64)
    cdef int64_t[::1] res = out
    cdef Py_ssize_t s, x, t
    cdef int64_t total
    for s in range(q):
        for x in range(1, q + 1):
            lut[x] = red[(s + x - 1) % q]
        lut[q + 1] = hub
        total = 0
        for t in range(nmoves):
            total += D[lut[a[t]], lut[b[t]]]
        res[s] = total
    return out


def held_karp(const int64_t[:, ::1] D):
    cdef Py_ssize_t n = D.shape[0]
    if n == 1:
        return 0, [0]
    cdef Py_ssize_t q = n - 1
    cdef Py_ssize_t size = 1 << q
    dp_arr = np.full((size, q), INF, dtype=np.int64)
    par_arr = np.full((size, q), -1, dtype=np.int64)
    cdef int64_t[:, ::1] dp = dp_arr
    cdef int64_t[:, ::1] parent = par_arr
    cdef Py_ssize_t mask, prev, i, j, bi
    cdef int64_t best, cand
    for j in range(q):
        dp[1 << j, j] = D[0, j + 1]
    for mask in range(1, size):
        if (mask & (mask - 1)) == 0:
            continue
        for j in range(q):
            if not (mask >> j) & 1:
                continue
            prev = mask ^ (1 << j)
            best = INF
            bi = -1
            for i in range(q):
                if (prev >> i) & 1:
                    cand = dp[prev, i] + D[i + 1, j + 1]
                    if cand < best:
                        best = cand
                        bi = i
            dp[mask, j] = best
            parent[mask, j] = bi
    cdef Py_ssize_t full = size - 1
    best = INF
    cdef Py_ssize_t last = 0
    for j in range(q):
        cand = dp[full, j] + D[j + 1, 0]
        if cand < best:
            best = cand
            last = j
    order = []
    mask = full
    j = last
    while j >= 0:
        order.append(j + 1)
        i = parent[mask, j]
        mask ^= 1 << j
        j = i
    order.append(0)
    order.reverse()
    return int(best), order


# ------------------------------------------------------------ TTP search

DEF MAXN = 8
DEF MAXDAYS = 14
DEF MAXOPT = 16

cdef int64_t SENT = 2**50
cdef int64_t NO_INCUMBENT = 2**62


cdef inline int _pop(int x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef class _Search:
    cdef int n, k, cap, trips, days_total
    cdef const int64_t[:, ::1] D
    cdef const int64_t[:, :, ::1] F
    cdef const int64_t[:, :, :, :, ::1] G
    cdef int loc[MAXN]
    cdef int streak[MAXN]
    cdef int last[MAXDAYS + 1][MAXN]
    cdef int away_left[MAXN]
    cdef int home_left[MAXN]
    cdef int64_t lbs[MAXN]
    cdef int day_a[MAXDAYS][MAXN]
    cdef int day_h[MAXDAYS][MAXN]
    cdef int best_a[MAXDAYS][MAXN]
    cdef int best_h[MAXDAYS][MAXN]
    cdef public int64_t best
    cdef public long long nodes
    cdef public bint found, timed_out
    cdef double deadline

    def __init__(self, D, int k, F, G, int64_t best, double deadline):
        cdef int t, u
        self.D = D
        self.F = F
        self.G = G
        self.n = D.shape[0]
        if self.n > MAXN:
            raise ValueError("compiled search supports at most 8 teams")
        self.k = k
        self.cap = min(k, self.n - 1)
        self.trips = F.shape[1]
        self.days_total = 2 * (self.n - 1)
        self.best = best
        self.deadline = deadline
        self.nodes = 0
        self.found = False
        self.timed_out = False
        for t in range(self.n):
            self.loc[t] = t
            self.streak[t] = 0
            self.last[0][t] = -1
            self.away_left[t] = ((1 << self.n) - 1) ^ (1 << t)
            self.home_left[t] = self.away_left[t]
        for t in range(self.n):
            self.lbs[t] = self.team_lb(t)

    cdef int64_t team_lb(self, int t):
        cdef int a = _pop(self.away_left[t])
        cdef int h = _pop(self.home_left[t])
        cdef int k = self.k
        cdef int s = self.streak[t]
        cdef int spill, r, top, c
        if s < 0:
            if a > (k + s) + k * h or h > k * (a + 1):
                return SENT
        elif s > 0:
            if h > (k - s) + k * a or a > k * (h + 1):
                return SENT
        elif a > k * (h + 1) or h > k * (a + 1):
            return SENT
        top = self.trips - 1
        if self.loc[t] == t:
            spill = h - (k - (s if s > 0 else 0))
            r = (spill + k - 1) // k if spill > 0 else 0
            if r > top:
                r = top
            return self.F[t, r, self.away_left[t]]
        r = (h + k - 1) // k - 1
        if r < 0:
            r = 0
        if r > top:
            r = top
        c = -s
        if c > self.cap:
            c = self.cap
        return self.G[t, c, self.loc[t], r, self.away_left[t]]

    cdef void rec(self, int64_t cost, int free, int d, int g):
        cdef int n = self.n
        cdef int k = self.k
        cdef int t, u, i, j, a, h, nopt, sa, sh
        cdef int la, lh, oa, oh
        cdef int64_t lba, lbh, added, total
        cdef int64_t opt_c[MAXOPT]
        cdef int opt_a[MAXOPT]
        cdef int opt_h[MAXOPT]
        cdef int64_t tc
        cdef int ta, th
        self.nodes += 1
        if (self.nodes & 65535) == 0:
            if _now() > self.deadline:
                self.timed_out = True
        if self.timed_out:
            return
        if free == 0:
            for i in range(g):
                self.last[d + 1][self.day_a[d][i]] = self.day_h[d][i]
                self.last[d + 1][self.day_h[d][i]] = self.day_a[d][i]
            if d + 1 == self.days_total:
                total = cost
                for t in range(n):
                    total += self.D[self.loc[t], t]
                if total < self.best:
                    self.best = total
                    self.found = True
                    for j in range(self.days_total):
                        for i in range(n // 2):
                            self.best_a[j][i] = self.day_a[j][i]
                            self.best_h[j][i] = self.day_h[j][i]
            else:
                self.rec(cost, (1 << n) - 1, d + 1, 0)
            return
        t = 0
        while not (free >> t) & 1:
            t += 1
        nopt = 0
        for u in range(t + 1, n):
            if not (free >> u) & 1:
                continue
            if self.last[d][t] == u:
                continue
            for i in range(2):
                if i == 0:
                    a = t
                    h = u
                else:
                    a = u
                    h = t
                if not (self.away_left[a] >> h) & 1:
                    continue
                if self.streak[a] <= -k or self.streak[h] >= k:
                    continue
                added = self.D[self.loc[a], h] + self.D[self.loc[h], h]
                # insertion sort on (added, a, h)
                j = nopt
                while j > 0 and (opt_c[j - 1] > added or (opt_c[j - 1] == added and (
                        opt_a[j - 1] > a or (opt_a[j - 1] == a and opt_h[j - 1] > h)))):
                    opt_c[j] = opt_c[j - 1]
                    opt_a[j] = opt_a[j - 1]
                    opt_h[j] = opt_h[j - 1]
                    j -= 1
                opt_c[j] = added
                opt_a[j] = a
                opt_h[j] = h
                nopt += 1
        for i in range(nopt):
            a = opt_a[i]
            h = opt_h[i]
            added = opt_c[i]
            la = self.loc[a]
            lh = self.loc[h]
            sa = self.streak[a]
            sh = self.streak[h]
            lba = self.lbs[a]
            lbh = self.lbs[h]
            self.loc[a] = h
            self.loc[h] = h
            self.streak[a] = sa - 1 if sa < 0 else -1
            self.streak[h] = sh + 1 if sh > 0 else 1
            self.away_left[a] ^= 1 << h
            self.home_left[h] ^= 1 << a
            self.lbs[a] = self.team_lb(a)
            self.lbs[h] = self.team_lb(h)
            if self.lbs[a] < SENT and self.lbs[h] < SENT:
                total = cost + added
                for u in range(n):
                    total += self.lbs[u]
                if total < self.best:
                    self.day_a[d][g] = a
                    self.day_h[d][g] = h
                    self.rec(cost + added, free & ~(1 << a) & ~(1 << h), d, g + 1)
            self.loc[a] = la
            self.loc[h] = lh
            self.streak[a] = sa
            self.streak[h] = sh
            self.lbs[a] = lba
            self.lbs[h] = lbh
            self.away_left[a] ^= 1 << h
            self.home_left[h] ^= 1 << a
            if self.timed_out:
                return

    def best_days(self):
        cdef int j, i
        return [[(self.best_a[j][i], self.best_h[j][i]) for i in range(self.n // 2)]
                for j in range(self.days_total)]


cdef double _now():
    return _monotonic()


from time import monotonic as _monotonic


def ttp_search(D, int k, F, G, best, double deadline):
    """Branch and bound for the optimum. Returns (timed_out, best, days or None, nodes)."""
    cdef _Search s = _Search(np.ascontiguousarray(D, dtype=np.int64), k,
                             np.ascontiguousarray(F, dtype=np.int64),
                             np.ascontiguousarray(G, dtype=np.int64), best, deadline)
    s.rec(0, (1 << s.n) - 1, 0, 0)
    return bool(s.timed_out), int(s.best), s.best_days() if s.found else None, int(s.nodes)

"""Exact desk-scale La*(n,P), ex*(sides,P), ex*_t(sides,P) and forb*(n,P).

All four reduce to the copies-of-P hypergraph on a host: its edges are the
image sets of induced copies, and P-free subfamilies are its independent sets.
"""
from __future__ import annotations

import time
from typing import NamedTuple

from . import config
from .embedding import GridFamily, copy_masks, full_grid, host_from_members
from .errors import SizeGuardError
from .lattice import SetFamily, full_lattice, popcount
from .poset import _bits, height


class SolverTimeout(Exception):
    """Raised by counters on timeout; ``lower_bound`` is what was counted so far."""

    def __init__(self, lower_bound):
        super().__init__(f"timed out; lower bound {lower_bound}")
        self.lower_bound = lower_bound


class ExtremalResult(NamedTuple):
    value: int
    witness: object
    exact: bool = True


class _Deadline(Exception):
    pass


class FreeSearch:
    """Independent sets of a hypergraph on vertices ``0..N-1``.

    Vertices are branched on in index order.  ``partitions`` are lists of
    disjoint vertex blocks; the maximum of a P-free family restricted to a block
    is solved exactly (memoized) and summed into an upper bound.
    """

    def __init__(self, N, edges, partitions=()):
        self.N = N
        self.edges = sorted(set(edges), key=lambda e: (popcount(e), e))
        self.by_vertex = [[] for _ in range(N)]
        for e in self.edges:
            for v in _bits(e):
                self.by_vertex[v].append(e)
        self.forbidden = 0
        for e in self.edges:
            if popcount(e) == 1:
                self.forbidden |= e
        self.partitions = []
        for blocks in partitions:
            inside = [[e for e in self.edges if e & ~b == 0] for b in blocks]
            if any(inside):
                self.partitions.append(list(zip(blocks, inside)))
        self._block_memo = {}
        self.nodes = 0

    # -- helpers ---------------------------------------------------------------

    def is_free(self, mask):
        return not any(e & ~mask == 0 for e in self.edges)

    def _block_max(self, key, block_edges, forced, avail):
        memo_key = (key, forced, avail)
        hit = self._block_memo.get(memo_key)
        if hit is not None:
            return hit
        edges = [e for e in block_edges if e & ~(forced | avail) == 0]

        def rec(cur, rest):
            live = [e for e in edges if e & ~(cur | rest) == 0]
            if not live:
                return popcount(cur | rest)
            v = rest & -rest
            best = rec(cur, rest & ~v)
            nxt = cur | v
            if not any(e & ~nxt == 0 for e in live):
                best = max(best, rec(nxt, rest & ~v))
            return best

        value = rec(forced, avail)
        self._block_memo[memo_key] = value
        return value

    def _bound(self, cur, alive, edges):
        size = popcount(cur)
        best = size + popcount(alive)
        used = 0
        packed = 0
        for e in edges:
            a = e & alive
            if not a & used:
                used |= a
                packed += 1
        best = min(best, size + popcount(alive) - packed)
        pool = cur | alive
        for pi, blocks in enumerate(self.partitions):
            total = 0
            covered = 0
            for bi, (b, inside) in enumerate(blocks):
                covered |= b
                if pool & b:
                    total += self._block_max((pi, bi), inside, cur & b, alive & b)
            total += popcount(pool & ~covered)
            best = min(best, total)
        return best

    def _kill(self, cur, v):
        """Vertices that would complete an edge once v joins ``cur``."""
        dead = 0
        for e in self.by_vertex[v]:
            rest = e & ~cur
            if rest and rest & (rest - 1) == 0:
                dead |= rest
        return dead

    def greedy(self, order):
        cur = 0
        alive = ((1 << self.N) - 1) & ~self.forbidden
        for v in order:
            if alive >> v & 1:
                cur |= 1 << v
                alive &= ~(1 << v)
                alive &= ~self._kill(cur, v)
        return cur

    def _tick(self, deadline):
        self.nodes += 1
        if deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > deadline:
            raise _Deadline

    # -- maximum ---------------------------------------------------------------

    def maximum(self, timeout=None, greedy_orders=()):
        """(size, mask, exact) of a largest independent set."""
        deadline = None if timeout is None else time.monotonic() + timeout
        best_mask = 0
        for order in greedy_orders:
            m = self.greedy(order)
            if popcount(m) > popcount(best_mask):
                best_mask = m
        best = [popcount(best_mask), best_mask]

        def rec(cur, alive, edges):
            self._tick(deadline)
            if not edges:
                total = popcount(cur | alive)
                if total > best[0]:
                    best[0], best[1] = total, cur | alive
                return
            if self._bound(cur, alive, edges) <= best[0]:
                return
            low = alive & -alive
            v = low.bit_length() - 1
            ncur = cur | low
            nalive = alive & ~low & ~self._kill(ncur, v)
            keep = ncur | nalive
            rec(ncur, nalive, [e for e in edges if e & ~keep == 0])
            nalive = alive & ~low
            rec(cur, nalive, [e for e in edges if not e & low])

        alive = ((1 << self.N) - 1) & ~self.forbidden
        start = [e for e in self.edges if not e & self.forbidden]
        try:
            rec(0, alive, start)
        except _Deadline:
            return best[0], best[1], False
        return best[0], best[1], True

    # -- counting and enumeration -----------------------------------------------

    def count(self, timeout=None):
        """Number of independent sets, including the empty set."""
        deadline = None if timeout is None else time.monotonic() + timeout
        total = [0]

        def rec(cur, alive, edges):
            self._tick(deadline)
            if not edges:
                total[0] += 1 << popcount(alive)
                return
            low = alive & -alive
            v = low.bit_length() - 1
            ncur = cur | low
            nalive = alive & ~low & ~self._kill(ncur, v)
            keep = ncur | nalive
            rec(ncur, nalive, [e for e in edges if e & ~keep == 0])
            rec(cur, alive & ~low, [e for e in edges if not e & low])

        alive = ((1 << self.N) - 1) & ~self.forbidden
        try:
            rec(0, alive, [e for e in self.edges if not e & self.forbidden])
        except _Deadline:
            raise SolverTimeout(total[0]) from None
        return total[0]

    def independent_sets(self):
        """Yield every independent set as a bitmask."""

        def rec(cur, alive, edges):
            if not edges:
                sub = alive
                while True:
                    yield cur | sub
                    if sub == 0:
                        return
                    sub = (sub - 1) & alive
            low = alive & -alive
            v = low.bit_length() - 1
            ncur = cur | low
            nalive = alive & ~low & ~self._kill(ncur, v)
            keep = ncur | nalive
            yield from rec(ncur, nalive, [e for e in edges if e & ~keep == 0])
            yield from rec(cur, alive & ~low, [e for e in edges if not e & low])

        alive = ((1 << self.N) - 1) & ~self.forbidden
        yield from rec(0, alive, [e for e in self.edges if not e & self.forbidden])


# -- host-specific set-up ------------------------------------------------------------

def _is_chain(P):
    return height(P) == P.size


def _index_partition(host, groups):
    index = {m: i for i, m in enumerate(host.members)}
    return [sum(1 << index[x] for x in g if x in index) for g in groups]


def _boolean_partitions(host, P):
    from .decomposition import scd
    n = host.n
    parts = []
    if n <= config.SCD_GUARD:
        parts.append(_index_partition(host, scd(n).chains))
    levels = [[m for m in host.members if popcount(m) == k] for k in range(n + 1)]
    parts.append(_index_partition(host, levels))
    return parts


def _grid_partitions(host, P):
    sides = host.sides
    axis = max(range(len(sides)), key=lambda i: (sides[i], -i))
    lines = {}
    for p in host.members:
        lines.setdefault(p[:axis] + p[axis + 1:], []).append(p)
    ranks = {}
    for p in host.members:
        ranks.setdefault(sum(p), []).append(p)
    return [_index_partition(host, lines.values()), _index_partition(host, ranks.values())]


def _middle_out(host):
    members = host.members
    if isinstance(host, GridFamily):
        mid = sum(k + 1 for k in host.sides) / 2
        key = lambda i: (abs(sum(members[i]) - mid), members[i])
    else:
        key = lambda i: (abs(popcount(members[i]) - host.n / 2), popcount(members[i]), members[i])
    return sorted(range(len(members)), key=key)


def solve_host(P, host, t=0, timeout=None):
    """Largest subfamily of ``host`` with no induced copy of P of gap >= t."""
    N = len(host.members)
    edges = copy_masks(P, host, t)
    if isinstance(host, GridFamily):
        partitions = _grid_partitions(host, P)
    else:
        partitions = _boolean_partitions(host, P)
    search = FreeSearch(N, edges, partitions)
    value, mask, exact = search.maximum(timeout, greedy_orders=[_middle_out(host), range(N)])
    witness = host_from_members(host, [host.members[i] for i in _bits(mask)])
    return ExtremalResult(value, witness, exact)


def la_star(n, P, timeout=None, guard=None):
    """La*(n, P): largest induced-P-free subfamily of 2^[n], with a witness."""
    if guard is None:
        guard = config.LA_STAR_CHAIN_GUARD if _is_chain(P) else config.LA_STAR_GUARD
    if n > guard:
        raise SizeGuardError(f"la_star limited to n <= {guard} for this poset, got {n}")
    return solve_host(P, full_lattice(n), 0, timeout)


def _check_grid(sides, guard):
    sides = tuple(int(k) for k in sides)
    volume = 1
    for k in sides:
        volume *= k
    if volume > guard:
        raise SizeGuardError(f"grid volume {volume} exceeds guard {guard}")
    return sides


def ex_star(sides, P, timeout=None, guard=config.EX_STAR_GUARD):
    """ex*(sides, P): largest induced-P-free subfamily of the grid."""
    sides = _check_grid(sides, guard)
    return solve_host(P, full_grid(sides), 0, timeout)


def ex_star_gapped(sides, P, t, timeout=None, guard=config.EX_STAR_GUARD):
    """ex*_t(sides, P): largest subfamily with no t-gapped induced copy of P."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    sides = _check_grid(sides, guard)
    return solve_host(P, full_grid(sides), t, timeout)


def forb_star_count(n, P, timeout=None, guard=config.FORB_GUARD):
    """forb*(n, P): number of induced-P-free subfamilies of 2^[n], the empty one included.

    Raises :class:`SolverTimeout` (carrying the partial count) on timeout.
    """
    if n > guard:
        raise SizeGuardError(f"forb_star_count limited to n <= {guard}, got {n}")
    host = full_lattice(n)
    return FreeSearch(len(host.members), copy_masks(P, host)).count(timeout)


def free_families(host, P, t=0):
    """Every subfamily of ``host`` free of (t-gapped) induced copies of P."""
    search = FreeSearch(len(host.members), copy_masks(P, host, t))
    members = host.members
    for mask in search.independent_sets():
        yield host_from_members(host, [members[i] for i in _bits(mask)])


def is_free(P, family, t=0):
    """True iff ``family`` has no induced copy of P of gap >= t."""
    return not copy_masks(P, family, t)

"""Induced copies of a poset inside set families and grids; d*(P) and mu(P)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, log2

import numpy as np

from . import config
from .errors import SizeGuardError
from .lattice import SetFamily, full_lattice, popcount
from .poset import Poset, _bits, height


@dataclass(frozen=True)
class GridFamily:
    """Points of [k_1] x ... x [k_d] (coordinates start at 1), coordinatewise order."""

    sides: tuple
    members: tuple

    def __post_init__(self):
        sides = tuple(int(k) for k in self.sides)
        if not sides or any(k < 1 for k in sides):
            raise ValueError("grid sides must be positive")
        members = tuple(tuple(int(a) for a in p) for p in self.members)
        for p in members:
            if len(p) != len(sides) or any(not 1 <= a <= k for a, k in zip(p, sides)):
                raise ValueError(f"point {p} outside grid {sides}")
        if len(set(members)) != len(members):
            raise ValueError("duplicate points")
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "members", members)

    @property
    def d(self):
        return len(self.sides)

    @property
    def volume(self):
        return int(np.prod(self.sides))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def subfamily(self, keep):
        return GridFamily(self.sides, [p for p in self.members if keep(p)])


def full_grid(sides):
    """Every point of the grid, by coordinate sum then lexicographically."""
    points = itertools.product(*(range(1, k + 1) for k in sides))
    return GridFamily(sides, sorted(points, key=lambda p: (sum(p), p)))


def grid_leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def host_lt(host, a, b):
    """Strict order of the ambient lattice of ``host``."""
    if isinstance(host, GridFamily):
        return a != b and grid_leq(a, b)
    return a != b and a & b == a


def host_gap(host, elements):
    """|join - meet| in the ambient lattice of ``host``."""
    elements = list(elements)
    if isinstance(host, GridFamily):
        return sum(max(col) - min(col) for col in zip(*elements))
    join, meet = 0, elements[0]
    for e in elements:
        join |= e
        meet &= e
    return popcount(join) - popcount(meet)


@lru_cache(maxsize=256)
def comparability(host):
    """``(up, down)`` bitsets over host indices: ``up[i]`` holds j with e_i < e_j."""
    N = len(host.members)
    if N == 0:
        return (), ()
    if isinstance(host, GridFamily):
        arr = np.array(host.members, dtype=np.int64)
        le = np.all(arr[:, None, :] <= arr[None, :, :], axis=2)
    else:
        arr = np.array(host.members, dtype=np.int64)
        le = (arr[:, None] & ~arr[None, :]) == 0
    np.fill_diagonal(le, False)
    weights = [1 << j for j in range(N)]
    up = tuple(sum(weights[j] for j in np.flatnonzero(row)) for row in le)
    down = tuple(sum(weights[j] for j in np.flatnonzero(col)) for col in le.T)
    return up, down


class Matcher:
    """Backtracking search for injective induced homomorphisms of a pattern.

    Pattern elements are assigned in a linear-extension order; each candidate
    set is the intersection of the comparability bitsets of earlier images.
    """

    def __init__(self, P, up, down):
        self.P = P
        self.up = up
        self.down = down
        self.N = len(up)
        self.order = P.linear_extension()

    def _plan(self, order):
        P = self.P
        plan = []
        for i, x in enumerate(order):
            below, above, incomp = [], [], []
            for y in order[:i]:
                if P.lt[y][x]:
                    below.append(y)
                elif P.lt[x][y]:
                    above.append(y)
                else:
                    incomp.append(y)
            plan.append((x, below, above, incomp))
        return plan

    def assignments(self, allowed, first=None):
        """Yield labelled embeddings as tuples of host indices, indexed by pattern element.

        ``first=(x, i)`` pins pattern element x to host index i.
        """
        k = self.P.size
        order = self.order
        if first is not None:
            x0, i0 = first
            if not allowed >> i0 & 1:
                return
            order = [x0] + [y for y in order if y != x0]
        plan = self._plan(order)
        images = [0] * k
        up, down = self.up, self.down

        def rec(pos, used):
            if pos == k:
                yield tuple(images)
                return
            x, below, above, incomp = plan[pos]
            if pos == 0 and first is not None:
                cand = 1 << first[1]
            else:
                cand = allowed & ~used
                for y in below:
                    cand &= up[images[y]]
                for y in above:
                    cand &= down[images[y]]
                for y in incomp:
                    i = images[y]
                    cand &= ~(up[i] | down[i])
            while cand:
                low = cand & -cand
                cand ^= low
                images[x] = low.bit_length() - 1
                yield from rec(pos + 1, used | low)

        yield from rec(0, 0)

    def count(self, allowed):
        """Number of labelled embeddings with images inside ``allowed``."""
        plan = self._plan(self.order)
        k = self.P.size
        images = [0] * k
        up, down = self.up, self.down

        def rec(pos, used):
            x, below, above, incomp = plan[pos]
            cand = allowed & ~used
            for y in below:
                cand &= up[images[y]]
            for y in above:
                cand &= down[images[y]]
            for y in incomp:
                i = images[y]
                cand &= ~(up[i] | down[i])
            if pos == k - 1:
                return popcount(cand)
            total = 0
            while cand:
                low = cand & -cand
                cand ^= low
                images[x] = low.bit_length() - 1
                total += rec(pos + 1, used | low)
            return total

        return rec(0, 0)

    def image_sets(self, allowed, first=None):
        """Distinct image sets (bitmasks over host indices), in discovery order."""
        seen = set()
        out = []
        for images in self.assignments(allowed, first):
            mask = 0
            for i in images:
                mask |= 1 << i
            if mask not in seen:
                seen.add(mask)
                out.append(mask)
        return out


def matcher_for(P, host):
    up, down = comparability(host)
    return Matcher(P, up, down)


@lru_cache(maxsize=512)
def automorphism_count(P):
    if P.size > config.AUTOMORPHISM_GUARD:
        raise SizeGuardError(f"automorphism count limited to |P| <= {config.AUTOMORPHISM_GUARD}")
    return Matcher(P, P.up, P.down).count((1 << P.size) - 1)


@dataclass(frozen=True)
class EmbeddingMap:
    """An induced copy: ``images[x]`` is the host element assigned to pattern element x."""

    host: object
    images: tuple

    @property
    def image_set(self):
        return frozenset(self.images)

    def gap(self):
        return host_gap(self.host, self.images)

    def sorted_images(self):
        if isinstance(self.host, GridFamily):
            return tuple(sorted(self.images))
        return tuple(sorted(self.images, key=lambda m: (popcount(m), m)))


def is_induced_copy(P, images, host):
    """Injective, and x <_P y exactly when images[x] < images[y] in the host lattice."""
    if len(set(images)) != len(images) or len(images) != P.size:
        return False
    return all(host_lt(host, images[x], images[y]) == P.lt[x][y]
               for x in range(P.size) for y in range(P.size) if x != y)


def find_induced_copies(P, host, limit=None):
    """Induced copies of P in ``host``, one per image set."""
    matcher = matcher_for(P, host)
    members = host.members
    out = []
    seen = set()
    allowed = (1 << len(members)) - 1
    for images in matcher.assignments(allowed):
        key = frozenset(images)
        if key in seen:
            continue
        seen.add(key)
        out.append(EmbeddingMap(host, tuple(members[i] for i in images)))
        if limit is not None and len(out) >= limit:
            break
    return out


def count_induced_copies(P, host):
    """Number of image sets of induced copies (labelled count / |Aut(P)|)."""
    if not host.members:
        return 0
    labelled = matcher_for(P, host).count((1 << len(host.members)) - 1)
    return labelled // automorphism_count(P)


def is_t_gapped(copy, t):
    return copy.gap() >= t


def copy_masks(P, host, t=0):
    """Every induced copy of P in ``host`` as a bitmask over host indices.

    With ``t > 0`` only copies of gap at least t in the ambient lattice are kept.
    """
    if not host.members:
        return []
    masks = matcher_for(P, host).image_sets((1 << len(host.members)) - 1)
    if t > 0:
        members = host.members
        masks = [m for m in masks if host_gap(host, (members[i] for i in _bits(m))) >= t]
    return masks


# -- d*(P) and mu(P) -------------------------------------------------------------

def embeds_in_cube(P, d):
    """True iff P has an induced copy inside the full lattice 2^[d]."""
    if P.size > 1 << d:
        return False
    host = full_lattice(d)
    matcher = matcher_for(P, host)
    # Sym(d) acts transitively on each level, so the first pattern element can
    # be pinned to one representative set {1..s} per size s.
    x0 = matcher.order[0]
    index = {m: i for i, m in enumerate(host.members)}
    allowed = (1 << len(host.members)) - 1
    for s in range(d + 1):
        rep = index[(1 << s) - 1]
        for _ in matcher.assignments(allowed, first=(x0, rep)):
            return True
    return False


def d_star_lower_bound(P):
    return max(height(P) - 1, ceil(log2(P.size)) if P.size > 1 else 0)


@lru_cache(maxsize=4096)
def _d_star(P):
    d = d_star_lower_bound(P)
    while not embeds_in_cube(P, d):
        d += 1
    return d


def d_star(P, guard=config.D_STAR_GUARD):
    """Least d such that P has an induced copy in 2^[d].

    Restricting any copy in 2^[n] to the interval [meet, join] gives a copy in
    2^[gap], so this is the minimum gap over all embeddings.  The canonical
    down-set embedding caps the search at |P|.
    """
    if P.size > guard:
        raise SizeGuardError(f"d* search limited to |P| <= {guard}, got {P.size}")
    return _d_star(Poset(P.size, P.lt))


def mu(P, guard=config.MU_GUARD):
    """min over induced subposets D with |D| >= 2 of d*(D) / (|D| - 1)."""
    if P.size > guard:
        raise SizeGuardError(f"mu limited to |P| <= {guard}, got {P.size}")
    if P.size < 2:
        raise ValueError("mu needs at least two elements")
    best = None
    for r in range(2, P.size + 1):
        for elements in itertools.combinations(range(P.size), r):
            value = Fraction(_d_star(P.restrict(elements)), r - 1)
            if best is None or value < best:
                best = value
    return best


# -- text format ------------------------------------------------------------------

def parse_grid_text(text):
    """First line ``d k_1 ... k_d``; then one point per line, ``a_1,...,a_d``."""
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty grid text")
    head = [int(tok) for tok in lines[0].split()]
    d, sides = head[0], tuple(head[1:])
    if len(sides) != d:
        raise ValueError(f"header declares d={d} but lists {len(sides)} sides")
    points = [tuple(int(tok) for tok in ln.split(",")) for ln in lines[1:]]
    return GridFamily(sides, points)


def format_grid(G):
    rows = [" ".join(map(str, (G.d,) + G.sides))]
    rows += [",".join(map(str, p)) for p in G.members]
    return "\n".join(rows) + "\n"


def host_from_members(host, members):
    """Family of the same kind and ambient lattice as ``host``."""
    if isinstance(host, GridFamily):
        return GridFamily(host.sides, members)
    return SetFamily(host.n, members)

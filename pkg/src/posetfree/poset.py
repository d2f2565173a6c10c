"""Finite posets stored as strict-order relation matrices.

Elements are ``0..size-1`` in the Python API.  The text format (see
:func:`parse_poset_text`) numbers elements from 1.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import config
from .errors import CycleError, SizeGuardError, UnknownNameError
from .lattice import SetFamily


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Poset:
    """A strict partial order on ``range(size)``; ``lt[x][y]`` means x < y."""

    size: int
    lt: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a poset needs at least one element")
        lt = tuple(tuple(bool(v) for v in row) for row in self.lt)
        if len(lt) != self.size or any(len(row) != self.size for row in lt):
            raise ValueError("relation matrix must be size x size")
        object.__setattr__(self, "lt", lt)
        k = self.size
        for x in range(k):
            if lt[x][x]:
                raise CycleError(f"element {x} is below itself")
            for y in range(k):
                if lt[x][y] and lt[y][x]:
                    raise CycleError(f"elements {x} and {y} are mutually below each other")
                if lt[x][y]:
                    for z in range(k):
                        if lt[y][z] and not lt[x][z]:
                            raise ValueError(f"relation is not transitive at {x}<{y}<{z}")

    @classmethod
    def from_relations(cls, k, pairs, name=""):
        """Transitive closure of ``pairs`` (0-based ``(x, y)`` meaning x < y)."""
        up = [0] * k
        for x, y in pairs:
            if not (0 <= x < k and 0 <= y < k):
                raise ValueError(f"pair ({x}, {y}) outside range({k})")
            up[x] |= 1 << y
        # Warshall on bitsets
        for m in range(k):
            bit = 1 << m
            for x in range(k):
                if up[x] & bit:
                    up[x] |= up[m]
        for x in range(k):
            if up[x] >> x & 1:
                raise CycleError(f"relation has a cycle through element {x}")
        lt = tuple(tuple(bool(up[x] >> y & 1) for y in range(k)) for x in range(k))
        return cls(k, lt, name)

    @classmethod
    def from_family(cls, members, name=""):
        """Inclusion order on a list of bitmasks (members must be distinct)."""
        k = len(members)
        lt = [[a != b and a & b == a for b in members] for a in members]
        return cls(k, lt, name)

    @cached_property
    def up(self):
        """``up[x]``: bitmask of elements strictly above x."""
        return tuple(sum(1 << y for y in range(self.size) if self.lt[x][y]) for x in range(self.size))

    @cached_property
    def down(self):
        return tuple(sum(1 << y for y in range(self.size) if self.lt[y][x]) for x in range(self.size))

    @cached_property
    def pairs(self):
        return tuple((x, y) for x in range(self.size) for y in range(self.size) if self.lt[x][y])

    def comparable(self, x, y):
        return self.lt[x][y] or self.lt[y][x]

    def covers(self):
        """Cover relations ``(x, y)``: x < y with nothing strictly between."""
        return [(x, y) for x, y in self.pairs if not self.up[x] & self.down[y]]

    def restrict(self, elements, name=""):
        elements = list(elements)
        lt = [[self.lt[a][b] for b in elements] for a in elements]
        return Poset(len(elements), lt, name)

    def dual(self):
        return Poset(self.size, [list(col) for col in zip(*self.lt)], self.name + "^op" if self.name else "")

    def linear_extension(self):
        """One linear extension, smallest available index first."""
        placed = 0
        order = []
        for _ in range(self.size):
            for x in range(self.size):
                if not placed >> x & 1 and self.down[x] & ~placed == 0:
                    order.append(x)
                    placed |= 1 << x
                    break
        return order

    def matrix(self):
        return np.array(self.lt, dtype=bool)

    def fingerprint(self):
        """Hash of the labelled relation matrix (not an isomorphism invariant)."""
        text = f"{self.size};" + ",".join(f"{x}<{y}" for x, y in self.pairs)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __repr__(self):
        label = self.name or "Poset"
        return f"<{label}: {self.size} elements, {len(self.pairs)} relations>"


def validate_poset(k, pairs):
    """Close ``pairs`` transitively and return the poset; cycles raise :class:`CycleError`."""
    return Poset.from_relations(k, pairs)


def height(P):
    """Number of elements in a longest chain."""
    longest = [1] * P.size
    for x in P.linear_extension():
        for y in _bits(P.down[x]):
            longest[x] = max(longest[x], longest[y] + 1)
    return max(longest)


def width(P):
    """Size of a largest antichain, by Dilworth: |P| minus a maximum matching
    in the bipartite graph x -> y for x < y."""
    match_of = [-1] * P.size

    def augment(x, seen):
        for y in _bits(P.up[x]):
            if seen[y]:
                continue
            seen[y] = True
            if match_of[y] < 0 or augment(match_of[y], seen):
                match_of[y] = x
                return True
        return False

    matching = sum(augment(x, [False] * P.size) for x in range(P.size))
    return P.size - matching


def is_antichain(P):
    return not P.pairs


def linear_extensions(P):
    """Yield every linear extension as a tuple of elements, bottom first."""
    k = P.size
    full = (1 << k) - 1

    def rec(placed, prefix):
        if placed == full:
            yield tuple(prefix)
            return
        for x in range(k):
            if not placed >> x & 1 and P.down[x] & ~placed == 0:
                prefix.append(x)
                yield from rec(placed | 1 << x, prefix)
                prefix.pop()

    yield from rec(0, [])


def dimension_of(P, max_d=None, guard=config.DIMENSION_GUARD):
    """Least d such that <_P is the intersection of d linear orders.

    Returns ``None`` when no realizer of size <= ``max_d`` exists.
    """
    if P.size > guard:
        raise SizeGuardError(f"dimension search limited to |P| <= {guard}, got {P.size}")
    if max_d is None:
        max_d = P.size
    incomparable = [(x, y) for x in range(P.size) for y in range(P.size)
                    if x != y and not P.comparable(x, y)]
    if not incomparable:
        return 1 if max_d >= 1 else None
    index = {pair: i for i, pair in enumerate(incomparable)}
    full = (1 << len(incomparable)) - 1
    # bit (x, y) is set when the extension puts y before x, which kills x < y
    masks = set()
    for ext in linear_extensions(P):
        pos = {x: i for i, x in enumerate(ext)}
        masks.add(sum(1 << i for (x, y), i in index.items() if pos[y] < pos[x]))
    masks = sorted(masks, key=lambda m: (-bin(m).count("1"), m))

    def cover(needed, depth):
        if needed == 0:
            return True
        if depth == 0:
            return False
        if depth == 1:
            return any(needed & ~m == 0 for m in masks)
        low = needed & -needed
        return any(cover(needed & ~m, depth - 1) for m in masks if m & low)

    for d in range(2, max_d + 1):
        if cover(full, d):
            return d
    return None


def induced_hom_check(f, P, Q):
    """True iff ``f(x) <_Q f(y)`` exactly when ``x <_P y``.

    ``f`` is a sequence (or mapping) sending each element of P to an element of Q.
    """
    for x in range(P.size):
        for y in range(P.size):
            if x != y and Q.lt[f[x]][f[y]] != P.lt[x][y]:
                return False
    return True


def canonical_embedding(P):
    """Down-set embedding x -> {y : y <= x} into the lattice on ``P.size`` points."""
    members = tuple(P.down[x] | 1 << x for x in range(P.size))
    return SetFamily(P.size, members)


def random_poset(k, p, seed):
    """Random DAG on ``range(k)`` (each i<j kept with probability p), transitively closed."""
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k) if rng.random() < p]
    return Poset.from_relations(k, pairs, name=f"random({k},{p},{seed})")


# -- catalog -----------------------------------------------------------------

def _chain(k=2):
    return Poset.from_relations(k, [(i, i + 1) for i in range(k - 1)], f"C_{k}")


def _antichain(k=2):
    return Poset.from_relations(k, [], f"A_{k}")


def _boolean(k=2):
    n = 1 << k
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and a & b == a]
    return Poset.from_relations(n, pairs, f"B_{k}")


def _diamond(k=2):
    # bottom 0, middle 1..k, top k+1
    top = k + 1
    return Poset.from_relations(k + 2, [(0, i) for i in range(1, top)] + [(i, top) for i in range(1, top)],
                                f"D_{k}")


def _fork(r=2):
    return Poset.from_relations(r + 1, [(0, i) for i in range(1, r + 1)], f"V_{r}")


def _lambda(r=2):
    return Poset.from_relations(r + 1, [(i, 0) for i in range(1, r + 1)], f"Lambda_{r}")


def _butterfly():
    return Poset.from_relations(4, [(0, 2), (0, 3), (1, 2), (1, 3)], "butterfly")


def _y():
    return Poset.from_relations(4, [(0, 1), (1, 2), (1, 3)], "Y")


def _n():
    return Poset.from_relations(4, [(0, 2), (1, 2), (1, 3)], "N")


_CATALOG = {
    "chain": _chain,
    "antichain": _antichain,
    "boolean": _boolean,
    "diamond": _diamond,
    "v": lambda: _fork(2),
    "fork": _fork,
    "lambda": _lambda,
    "λ": _lambda,
    "butterfly": _butterfly,
    "y": _y,
    "n": _n,
}


def standard_poset(name, *params):
    """Catalog poset: chain k, antichain k, boolean k, diamond k, V, Lambda, fork r,
    butterfly, Y, N."""
    try:
        build = _CATALOG[name.lower()]
    except KeyError:
        raise UnknownNameError(f"unknown poset {name!r}; known: {', '.join(sorted(_CATALOG))}") from None
    return build(*[int(p) for p in params])


def poset_from_spec(spec):
    """``"chain:3"``, ``"V"`` or ``"boolean:2"`` style catalog reference."""
    name, *params = spec.split(":")
    return standard_poset(name, *params)


def parse_poset_text(text):
    """First line ``k``; then lines ``i j`` (1-based) meaning i < j."""
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty poset text")
    k = int(lines[0])
    pairs = []
    for ln in lines[1:]:
        i, j = (int(tok) for tok in ln.split())
        pairs.append((i - 1, j - 1))
    return validate_poset(k, pairs)


def format_poset(P):
    rows = [str(P.size)] + [f"{x + 1} {y + 1}" for x, y in P.covers()]
    return "\n".join(rows) + "\n"


def load_poset(source):
    """A catalog spec such as ``chain:3`` or a path to a poset text file."""
    try:
        return poset_from_spec(source)
    except (UnknownNameError, ValueError, TypeError):
        with open(source) as fh:
            return parse_poset_text(fh.read())


def all_catalog_posets(max_size):
    """Every catalog instance with at most ``max_size`` elements, deterministic order."""
    out = []
    for k in range(2, max_size + 1):
        out.append(_chain(k))
        out.append(_antichain(k))
    for k in itertools.count(1):
        if 1 << k > max_size:
            break
        out.append(_boolean(k))
    for k in range(1, max_size - 1):
        out.append(_diamond(k))
    for r in range(2, max_size):
        out.append(_fork(r))
        out.append(_lambda(r))
    if max_size >= 4:
        out.extend([_butterfly(), _y(), _n()])
    return out

"""Chain and grid partitions of 2^[n], and the random-permutation pair bound."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, factorial, floor, sqrt

import numpy as np

from . import config
from .errors import CoverError, RangeError, SizeGuardError
from .lattice import as_rng, mask_to_set, popcount


@dataclass(frozen=True)
class ChainPartition:
    n: int
    chains: tuple

    def __post_init__(self):
        object.__setattr__(self, "chains", tuple(tuple(c) for c in self.chains))

    def lengths(self):
        return [len(c) for c in self.chains]

    def check(self):
        """Raise :class:`CoverError` unless the chains are disjoint, cover 2^[n] and are chains."""
        seen = set()
        for c in self.chains:
            for a, b in zip(c, c[1:]):
                if a == b or a & ~b:
                    raise CoverError(f"{c} is not an inclusion chain")
            for x in c:
                if x in seen:
                    raise CoverError(f"set 0x{x:x} lies in two chains")
                seen.add(x)
        if len(seen) != 1 << self.n or any(x >> self.n for x in seen):
            raise CoverError("chains do not cover 2^[n]")


def scd(n, guard=config.SCD_GUARD):
    """Symmetric chain decomposition by parenthesis matching.

    Read a set as a word over positions 1..n, with members as ')' and
    non-members as '('.  Sets sharing the same matched pairs form one chain; a
    chain is climbed by turning its leftmost unmatched '(' into ')'.
    """
    if n > guard:
        raise SizeGuardError(f"scd limited to n <= {guard}, got {n}")
    if n < 0:
        raise RangeError("n must be nonnegative")
    chains = []
    for bottom in sorted(range(1 << n), key=lambda m: (popcount(m), m)):
        unmatched_open = []
        stack = []
        starts_chain = True
        for i in range(n):
            if bottom >> i & 1:
                if stack:
                    stack.pop()
                else:
                    starts_chain = False  # an unmatched ')' means a lower set exists
                    break
            else:
                stack.append(i)
        if not starts_chain:
            continue
        unmatched_open = stack  # positions of unmatched '(' in increasing order
        chain = [bottom]
        x = bottom
        for i in unmatched_open:
            x |= 1 << i
            chain.append(x)
        chains.append(tuple(chain))
    return ChainPartition(n, chains)


def split_lengths(length, L):
    """Segment lengths for a chain longer than 2L, as even as possible, longer first."""
    if length <= 2 * L:
        return [length]
    q = -(-length // (2 * L))
    base, extra = divmod(length, q)
    return [base + 1] * extra + [base] * (q - extra)


def _repair(chains, L):
    """Lengthen short chains by taking an end element from a chain that can spare one."""
    chains = [list(c) for c in chains]
    for _ in range(len(chains) * 2 * L + 1):
        moved = False
        for i, c in enumerate(chains):
            if len(c) >= L:
                continue
            for j, other in enumerate(chains):
                if j == i or len(other) <= L:
                    continue
                if other[0] & c[-1] == c[-1] and other[0] != c[-1]:
                    c.append(other.pop(0))
                    moved = True
                    break
                if other[-1] & c[0] == other[-1] and other[-1] != c[0]:
                    c.insert(0, other.pop())
                    moved = True
                    break
        if not moved:
            break
    return [tuple(c) for c in chains]


def chain_partition_bounded(n, L, repair=False, guard=config.CHAIN_PARTITION_GUARD):
    """Chain partition aiming at lengths in [L, 2L] (lengths count sets).

    Starts from :func:`scd`, splits long chains with :func:`split_lengths`,
    optionally runs :func:`_repair`, and returns ``(partition, violations)``
    where ``violations`` lists ``(chain index, length)`` for every chain whose
    length is outside [L, 2L].
    """
    if n > guard:
        raise SizeGuardError(f"bounded chain partition limited to n <= {guard}, got {n}")
    if L < 1:
        raise RangeError("L must be at least 1")
    chains = []
    for c in scd(n).chains:
        start = 0
        for seg in split_lengths(len(c), L):
            chains.append(c[start:start + seg])
            start += seg
    if repair:
        chains = _repair(chains, L)
    cp = ChainPartition(n, chains)
    violations = [(i, len(c)) for i, c in enumerate(cp.chains) if not L <= len(c) <= 2 * L]
    return cp, violations


def default_side_length(n, d, c=config.DEFAULT_C):
    return max(1, floor(c * sqrt(n / d)))


def block_sizes(n, d):
    q, r = divmod(n, d)
    return [q + 1] * r + [q] * (d - r)


def _shift(mask, elements):
    """Send bit j of ``mask`` to bit ``elements[j]``."""
    out = 0
    for j, e in enumerate(elements):
        if mask >> j & 1:
            out |= 1 << e
    return out


@dataclass(frozen=True)
class GridPartition:
    """2^[n] cut into products of chains, one chain per block of a partition of [n].

    ``blocks[i]`` lists the ground elements (0-based bit positions) of block i;
    ``sides[i]`` is the chain partition of the block's sublattice;
    grid j is the product of ``sides[i][grids[j][i]]`` over i.
    """

    n: int
    d: int
    blocks: tuple
    sides: tuple
    violations: tuple = ()
    perm: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        object.__setattr__(self, "sides", tuple(tuple(tuple(c) for c in s) for s in self.sides))

    @property
    def grids(self):
        """Chain-index tuples, one per grid, in product order."""
        return list(itertools.product(*(range(len(s)) for s in self.sides)))

    def __len__(self):
        return int(np.prod([len(s) for s in self.sides]))

    def grid_chains(self, j):
        return tuple(self.sides[i][c] for i, c in enumerate(self.grids[j]))

    def grid_sides(self, j):
        return tuple(len(c) for c in self.grid_chains(j))

    @cached_property
    def _lookup(self):
        """Per block: part-of-set -> (chain index, 1-based position)."""
        tables = []
        for side in self.sides:
            table = {}
            for ci, chain in enumerate(side):
                for pos, x in enumerate(chain, start=1):
                    table[x] = (ci, pos)
            tables.append(table)
        return tables

    @cached_property
    def _block_masks(self):
        return [sum(1 << e for e in b) for b in self.blocks]

    @cached_property
    def _radix(self):
        out = []
        acc = 1
        for s in reversed(self.sides):
            out.append(acc)
            acc *= len(s)
        return out[::-1]

    def locate(self, X):
        """(grid index, 1-based grid coordinates) of the set X."""
        j = 0
        coords = []
        for i, bm in enumerate(self._block_masks):
            ci, pos = self._lookup[i][X & bm]
            j += ci * self._radix[i]
            coords.append(pos)
        return j, tuple(coords)

    def point(self, j, coords):
        """Inverse of :meth:`locate`."""
        return sum(chain[a - 1] for chain, a in zip(self.grid_chains(j), coords))

    def members(self, j):
        return [sum(parts) for parts in itertools.product(*self.grid_chains(j))]

    def check_cover(self):
        """Exhaustive disjoint-cover and chain checks; raises :class:`CoverError`."""
        union = 0
        for b in self._block_masks:
            if union & b:
                raise CoverError("blocks overlap")
            union |= b
        if union != (1 << self.n) - 1:
            raise CoverError("blocks do not cover [n]")
        for i, side in enumerate(self.sides):
            bm = self._block_masks[i]
            seen = set()
            for chain in side:
                for a, b in zip(chain, chain[1:]):
                    if a == b or a & ~b:
                        raise CoverError("side is not a chain")
                for x in chain:
                    if x & ~bm or x in seen:
                        raise CoverError("side chains overlap or leave their block")
                    seen.add(x)
            if len(seen) != 1 << len(self.blocks[i]):
                raise CoverError("side chains do not cover the block sublattice")
        total = 0
        for j in range(len(self)):
            for X in self.members(j):
                if self.locate(X)[0] != j:
                    raise CoverError(f"set 0x{X:x} located outside its grid")
                total += 1
        if total != 1 << self.n:
            raise CoverError("grid sizes do not add up to 2^n")


def grid_partition(n, d, L, repair=False, guard=config.GRID_BLOCK_GUARD, check=True):
    """Partition 2^[n] into d-dimensional grids.

    [n] is cut into d consecutive blocks of sizes floor/ceil(n/d); each block's
    sublattice gets :func:`chain_partition_bounded`; grids are all products
    picking one chain per block.
    """
    if not 1 <= d <= n:
        raise RangeError(f"need 1 <= d <= n, got n={n}, d={d}")
    sizes = block_sizes(n, d)
    if max(sizes) > guard:
        raise SizeGuardError(f"block size {max(sizes)} exceeds guard {guard}")
    blocks, sides, violations = [], [], []
    start = 0
    for i, m in enumerate(sizes):
        elements = list(range(start, start + m))
        cp, bad = chain_partition_bounded(m, L, repair=repair)
        blocks.append(elements)
        sides.append([tuple(_shift(x, elements) for x in c) for c in cp.chains])
        violations.extend((i, ci, length) for ci, length in bad)
        start += m
    gp = GridPartition(n, d, blocks, sides, tuple(violations), tuple(range(n)))
    if check:
        gp.check_cover()
    return gp


def random_permutation(n, seed):
    return tuple(int(v) for v in as_rng(seed).permutation(n))


def permute_partition(gp, seed=None, perm=None):
    """Image of the partition under a permutation of [n] (uniform unless ``perm`` given).

    ``perm[i]`` is the image of element i (0-based).
    """
    if perm is None:
        perm = random_permutation(gp.n, seed)
    perm = tuple(perm)
    if sorted(perm) != list(range(gp.n)):
        raise ValueError("perm must be a permutation of range(n)")

    def apply(x):
        out = 0
        for i in range(gp.n):
            if x >> i & 1:
                out |= 1 << perm[i]
        return out

    blocks = [[perm[e] for e in b] for b in gp.blocks]
    sides = [[tuple(apply(x) for x in c) for c in side] for side in gp.sides]
    base = gp.perm or tuple(range(gp.n))
    composed = tuple(perm[base[i]] for i in range(gp.n))
    return GridPartition(gp.n, gp.d, blocks, sides, gp.violations, composed)


def grid_pair_probability_bound(sizeA, sizeB, n, d):
    """C(k+d-1, d-1) k! (n-|B|)! / (n-|A|)! with k = |B| - |A| (not clamped)."""
    if not 0 <= sizeA <= sizeB <= n or d < 1:
        raise RangeError(f"need 0 <= |A| <= |B| <= n and d >= 1, got {sizeA}, {sizeB}, {n}, {d}")
    k = sizeB - sizeA
    return Fraction(comb(k + d - 1, d - 1) * factorial(k) * factorial(n - sizeB), factorial(n - sizeA))


_CHUNK = 4096


def _same_grid_hits(gp, A, B, trials, rng):
    n = gp.n
    perms = np.argsort(rng.random((trials, n)), axis=1)  # perms[t, i] = pi(i)
    weights = np.int64(1) << np.arange(n, dtype=np.int64)
    pre_a = (((np.int64(A) >> perms) & 1) * weights).sum(axis=1)
    pre_b = (((np.int64(B) >> perms) & 1) * weights).sum(axis=1)
    same = np.ones(trials, dtype=bool)
    for i, elements in enumerate(gp.blocks):
        table = np.empty(1 << len(elements), dtype=np.int64)
        for x, (ci, _) in gp._lookup[i].items():
            table[sum(1 << j for j, e in enumerate(elements) if x >> e & 1)] = ci
        part_a = np.zeros(trials, dtype=np.int64)
        part_b = np.zeros(trials, dtype=np.int64)
        for j, e in enumerate(elements):
            part_a |= ((pre_a >> e) & 1) << j
            part_b |= ((pre_b >> e) & 1) << j
        same &= table[part_a] == table[part_b]
    return int(same.sum())


def estimate_grid_pair_probability(gp, A, B, trials, seed, threads=1):
    """Fraction of uniform permutations pi for which A and B share a grid of pi(gp).

    Trials run in fixed chunks with spawned child seeds, so the estimate does
    not depend on ``threads``.
    """
    if A & ~B:
        raise RangeError("the pair estimate needs A ⊆ B")
    if A == B:
        return 1.0
    chunks = [min(_CHUNK, trials - s) for s in range(0, trials, _CHUNK)]
    seeds = np.random.SeedSequence(seed).spawn(len(chunks))
    jobs = [(size, np.random.default_rng(s)) for size, s in zip(chunks, seeds)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = list(pool.map(lambda job: _same_grid_hits(gp, A, B, job[0], job[1]), jobs))
    else:
        hits = [_same_grid_hits(gp, A, B, size, rng) for size, rng in jobs]
    return sum(hits) / trials


# -- export ---------------------------------------------------------------------------

def _fmt_set(x):
    return "{" + ",".join(map(str, mask_to_set(x))) + "}"


def format_partition(gp):
    """One stanza per grid; each side is a chain of hex bitmasks."""
    lines = [f"# grid partition n={gp.n} d={gp.d} grids={len(gp)}"]
    for j in range(len(gp)):
        lines.append(f"grid {j}")
        for i, chain in enumerate(gp.grid_chains(j)):
            lines.append(f"  side {i}: " + " < ".join(f"0x{x:x}" for x in chain))
        lines.append("")
    return "\n".join(lines)


def partition_to_dot(gp):
    """Graphviz source: one cluster per grid, cover edges inside each grid."""
    lines = ["digraph grids {", "  rankdir=BT;"]
    for j in range(len(gp)):
        members = gp.members(j)
        lines.append(f"  subgraph cluster_{j} {{")
        lines.append(f'    label="G{j}";')
        for x in members:
            lines.append(f'    s{x} [label="{_fmt_set(x)}"];')
        member_set = set(members)
        for x in members:
            for e in range(gp.n):
                y = x | 1 << e
                if y != x and y in member_set and gp.locate(y)[0] == j:
                    cx, cy = gp.locate(x)[1], gp.locate(y)[1]
                    if sum(b - a for a, b in zip(cx, cy)) == 1:
                        lines.append(f"    s{x} -> s{y};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"

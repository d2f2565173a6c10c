"""Bitmask view of the Boolean lattice 2^[n] and its interval sublattices.

A subset of [n] = {1, ..., n} is an int whose bit ``i-1`` marks element ``i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np

from . import config
from .errors import EmptyFamilyError, RangeError, SizeGuardError


def popcount(mask):
    return bin(mask).count("1")


def mask_to_set(mask):
    """Elements of [n] (1-based) in ``mask``."""
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def set_to_mask(elements):
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"ground set elements start at 1, got {e}")
        mask |= 1 << (e - 1)
    return mask


def as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class SetFamily:
    """Distinct subsets of [n], kept in the given order."""

    n: int
    members: tuple

    def __post_init__(self):
        if not 0 <= self.n <= config.WORD_GUARD:
            raise SizeGuardError(f"ground set size must be in [0, {config.WORD_GUARD}], got {self.n}")
        members = tuple(int(m) for m in self.members)
        object.__setattr__(self, "members", members)
        limit = 1 << self.n
        if any(not 0 <= m < limit for m in members):
            raise ValueError(f"member outside 2^[{self.n}]")
        if len(set(members)) != len(members):
            raise ValueError("duplicate members")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, mask):
        return mask in self._member_set

    @cached_property
    def _member_set(self):
        return frozenset(self.members)

    def sorted(self):
        """Same family, members by size then value."""
        return SetFamily(self.n, sorted(self.members, key=lambda m: (popcount(m), m)))

    def subfamily(self, keep):
        return SetFamily(self.n, [m for m in self.members if keep(m)])

    def as_mask_list(self):
        return list(self.members)


def full_lattice(n):
    """All of 2^[n], ordered by size then value."""
    return SetFamily(n, sorted(range(1 << n), key=lambda m: (popcount(m), m)))


def level(n, k):
    return SetFamily(n, [sum(1 << i for i in c) for c in itertools.combinations(range(n), k)])


def middle_level(n):
    return level(n, n // 2)


def _members(S):
    members = list(S.members if isinstance(S, SetFamily) else S)
    if not members:
        raise EmptyFamilyError("family is empty")
    return members


def family_join_meet(S):
    """(union, intersection) of a nonempty family."""
    members = _members(S)
    join, meet = 0, members[0]
    for m in members:
        join |= m
        meet &= m
    return join, meet


def gap_d(S):
    """|union S| - |intersection S|."""
    join, meet = family_join_meet(S)
    return popcount(join) - popcount(meet)


@dataclass(frozen=True)
class IntervalSublattice:
    """All C with A ⊆ C ⊆ B."""

    A: int
    B: int

    def __post_init__(self):
        if self.A & ~self.B:
            raise ValueError("interval needs A ⊆ B")

    @property
    def m(self):
        return popcount(self.B & ~self.A)

    def __contains__(self, C):
        return C & self.A == self.A and C & ~self.B == 0

    def contains_family(self, S):
        join, meet = family_join_meet(S)
        return meet & self.A == self.A and join & ~self.B == 0

    def __len__(self):
        return 1 << self.m

    def members(self):
        free = self.B & ~self.A
        sub = free
        out = []
        while True:
            out.append(self.A | sub)
            if sub == 0:
                break
            sub = (sub - 1) & free
        return sorted(out, key=lambda c: (popcount(c), c))


def _check_nm(n, m):
    if not 0 <= m <= n:
        raise RangeError(f"need 0 <= m <= n, got n={n}, m={m}")


def count_intervals(n, m):
    """Number of dimension-m interval sublattices of 2^[n]: C(n, m) 2^(n-m)."""
    _check_nm(n, m)
    return comb(n, m) << (n - m)


def iter_intervals(n, m):
    """Every dimension-m interval: choose the free coordinates, then the fixed values."""
    _check_nm(n, m)
    full = (1 << n) - 1
    for free_idx in itertools.combinations(range(n), m):
        free = sum(1 << i for i in free_idx)
        rest = full & ~free
        sub = rest
        while True:
            yield IntervalSublattice(sub, sub | free)
            if sub == 0:
                break
            sub = (sub - 1) & rest


def sample_interval(n, m, seed):
    """Uniform dimension-m interval: a uniform m-set of free coordinates and a
    uniform 0/1 value on each of the other n-m coordinates."""
    _check_nm(n, m)
    rng = as_rng(seed)
    free_idx = rng.choice(n, size=m, replace=False) if m else []
    free = sum(1 << int(i) for i in free_idx)
    bits = rng.integers(0, 2, size=n)
    fixed = sum(1 << i for i in range(n) if bits[i]) & ~free
    return IntervalSublattice(fixed, fixed | free)


def sample_intervals(n, m, size, seed):
    """Vectorized :func:`sample_interval`; returns int64 arrays ``(A, B)``."""
    _check_nm(n, m)
    rng = as_rng(seed)
    weights = np.int64(1) << np.arange(n, dtype=np.int64)
    keys = rng.random((size, n))
    free_cols = np.argsort(keys, axis=1)[:, :m]
    free = np.zeros(size, dtype=np.int64)
    if m:
        free = weights[free_cols].sum(axis=1)
    fixed = (rng.integers(0, 2, size=(size, n)) * weights).sum(axis=1) & ~free
    return fixed, fixed | free


def containment_probability(n, m, d):
    """P(S ⊆ W) for a uniform dimension-m interval W and a family with gap d."""
    if not (0 <= m <= n and d >= 0):
        raise RangeError(f"need 0 <= m <= n and d >= 0, got n={n}, m={m}, d={d}")
    if d > n:
        raise RangeError(f"gap {d} exceeds n={n}")
    if d > m:
        return Fraction(0)
    return Fraction(comb(m, d), comb(n, d) << (n - m))


def count_containing_intervals(S, n, m):
    """How many dimension-m intervals contain every member of S (enumeration)."""
    join, meet = family_join_meet(S)
    return sum(1 for W in iter_intervals(n, m) if meet & W.A == W.A and join & ~W.B == 0)


def verify_containment_lemma(S, m, n=None, guard=config.ENUMERATION_GUARD):
    """(exhaustive frequency, closed form) for S inside a random dimension-m interval."""
    if n is None:
        if not isinstance(S, SetFamily):
            raise ValueError("n is required when S is not a SetFamily")
        n = S.n
    if n > guard:
        raise SizeGuardError(f"interval enumeration limited to n <= {guard}, got {n}")
    _check_nm(n, m)
    hits = count_containing_intervals(S, n, m)
    exact = Fraction(hits, count_intervals(n, m))
    return exact, containment_probability(n, m, gap_d(S))


def estimate_containment(S, m, trials, seed, n=None):
    """Monte-Carlo frequency of S ⊆ W over ``trials`` uniform intervals."""
    if n is None:
        n = S.n
    join, meet = family_join_meet(S)
    A, B = sample_intervals(n, m, trials, seed)
    hits = ((np.int64(meet) & A) == A) & ((np.int64(join) & ~B) == 0)
    return float(hits.mean())


# -- text format ---------------------------------------------------------------

def _parse_member(token):
    token = token.strip()
    if token.lower().startswith("0x"):
        return int(token, 16)
    if token in ("", "{}", "-", "∅"):
        return 0
    return set_to_mask(int(t) for t in token.strip("{}").split(","))


def parse_family_text(text):
    """First line ``n``; then one member per line, ``1,3,4`` or ``0x0d`` (``{}`` for ∅)."""
    lines = [ln.split("#")[0] for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ValueError("empty family text")
    n = int(lines[0])
    return SetFamily(n, [_parse_member(ln) for ln in lines[1:]])


def format_family(F, hex_masks=False):
    rows = [str(F.n)]
    for m in F.members:
        if hex_masks:
            rows.append(f"0x{m:x}")
        else:
            rows.append(",".join(map(str, mask_to_set(m))) or "{}")
    return "\n".join(rows) + "\n"

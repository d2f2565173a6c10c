"""Balanced supersaturation: greedy copy collections, gapped shifts, grid averaging
and the grid-partition extraction pipeline."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, floor, log, sqrt
from typing import NamedTuple

import numpy as np

from . import config
from .decomposition import default_side_length, grid_partition, permute_partition
from .embedding import (EmbeddingMap, GridFamily, d_star, find_induced_copies, full_grid,
                        host_gap, is_induced_copy, matcher_for, mu)
from .errors import RangeError, SwapVerificationError
from .extremal import ex_star, ex_star_gapped
from .lattice import SetFamily, as_rng, family_join_meet, gap_d, popcount
from .poset import Poset


@dataclass(frozen=True)
class SupersatParams:
    """Constants of the balanced-supersaturation argument.

    ``K_P`` defaults to 2^(|P| + log2|P| + 2).  ``alpha`` is the multiplier of
    t in the dangerous-set exponent (1 or 2).  ``thresholds`` maps a subset
    size to a fixed danger threshold, overriding the formula for that size.
    """

    t: int = 1
    k: float = 8.0
    K_P: float | None = None
    alpha: int = 1
    C_P: float = 1.0
    epsilon: float = 1.0
    c: float = config.DEFAULT_C
    d: int = 2
    mu: Fraction | None = None
    thresholds: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be at least 1")
        if self.alpha not in (1, 2):
            raise ValueError("alpha must be 1 or 2")
        if self.k <= 0 or self.c <= 0:
            raise ValueError("k and c must be positive")

    @property
    def K(self):
        return sqrt(math.pi) / self.c

    @property
    def t_prime(self):
        return floor(self.t / (self.K * sqrt(self.d)))

    def kp(self, P):
        if self.K_P is not None:
            return float(self.K_P)
        return 2.0 ** (P.size + math.log2(P.size) + 2)

    def mu_of(self, P):
        return self.mu if self.mu is not None else mu(P)

    def threshold(self, P, s, mu_value):
        """Degree at which a set of s host elements becomes dangerous."""
        if s in self.thresholds:
            return self.thresholds[s]
        return self.kp(P) * (self.k / 8) ** (self.alpha * self.t * float(mu_value) * (P.size - s))

    def cap(self, P, s, mu_value, multiplier=2):
        """2 K_P (k/8)^(multiplier t mu (|P| - s)); multiplier 2 is the stated degree cap."""
        return 2 * self.kp(P) * (self.k / 8) ** (multiplier * self.t * float(mu_value) * (P.size - s))


class CongruenceSplit(NamedTuple):
    classes: list
    largest: int


def congruence_split(F, t):
    """Families G_i = {A in F : |A| = i mod t}, i = 0..t-1, with the largest one's index."""
    if t < 1:
        raise ValueError("t must be at least 1")
    classes = [SetFamily(F.n, [m for m in F.members if popcount(m) % t == i]) for i in range(t)]
    largest = max(range(t), key=lambda i: (len(classes[i]), -i))
    return CongruenceSplit(classes, largest)


class GapViolation(NamedTuple):
    members: tuple
    gap: int
    d_star: int
    t: int


def _gap_check(S, t):
    S = tuple(sorted(S, key=lambda m: (popcount(m), m)))
    g = gap_d(S)
    ds = d_star(Poset.from_family(S))
    return GapViolation(S, g, ds, t) if g < t * ds else None


def probe_gap_claim(F_i, t, samples=None, seed=0, max_size=4):
    """Subsets S of F_i (2 <= |S| <= max_size) with d(S) < t d*(S).

    ``samples=None`` checks every subset; otherwise ``samples`` random subsets
    are drawn (size uniform, then members uniform).  Diagnostic only.
    """
    members = list(F_i.members)
    top = min(max_size, len(members))
    found = {}
    if samples is None:
        for r in range(2, top + 1):
            for S in itertools.combinations(members, r):
                v = _gap_check(S, t)
                if v:
                    found[v.members] = v
    elif top >= 2:
        rng = as_rng(seed)
        for _ in range(samples):
            r = int(rng.integers(2, top + 1))
            idx = rng.choice(len(members), size=r, replace=False)
            v = _gap_check([members[i] for i in idx], t)
            if v:
                found[v.members] = v
    return sorted(found.values(), key=lambda v: (len(v.members), v.members))


class CopyCollection:
    """Copies (sorted image tuples) with deg(S) for every nonempty subset S of a stored copy."""

    def __init__(self, pattern, host):
        self.pattern = pattern
        self.host = host
        self.copies = []
        self.degree_index = {}

    def deg(self, S):
        return self.degree_index.get(tuple(sorted(S, key=lambda m: (popcount(m), m))), 0)

    @staticmethod
    def _subsets(copy):
        for r in range(1, len(copy) + 1):
            yield from itertools.combinations(copy, r)

    def add(self, copy):
        copy = tuple(sorted(copy, key=lambda m: (popcount(m), m)))
        self.copies.append(copy)
        for S in self._subsets(copy):
            self.degree_index[S] = self.degree_index.get(S, 0) + 1

    def __len__(self):
        return len(self.copies)

    def recount(self):
        """Degree index rebuilt from scratch (for consistency checks)."""
        fresh = {}
        for copy in self.copies:
            for S in self._subsets(copy):
                fresh[S] = fresh.get(S, 0) + 1
        return fresh


def _sorted_images(copy):
    return tuple(sorted(copy.images, key=lambda m: (popcount(m), m)))


def greedy_balanced_collection(F, P, params=SupersatParams()):
    """Greedy collection of copies of P that never touches a dangerous set.

    Works in the largest residue class of |A| mod t.  Candidates are taken in
    lexicographic order of their sorted image bitmasks; a copy is added iff
    none of its nonempty subsets S has deg(S) >= threshold(|S|).
    Returns ``(collection, report)``.
    """
    split = congruence_split(F, params.t)
    Fi = split.classes[split.largest]
    mu_value = params.mu_of(P)
    k = P.size
    thr = {s: params.threshold(P, s, mu_value) for s in range(1, k + 1)}
    H = CopyCollection(P, Fi)
    candidates = sorted(_sorted_images(c) for c in find_induced_copies(P, Fi))
    max_excess = -math.inf
    for copy in candidates:
        subsets = list(CopyCollection._subsets(copy))
        if any(H.degree_index.get(S, 0) >= thr[len(S)] for S in subsets):
            continue
        H.add(copy)
        max_excess = max(max_excess, max(H.degree_index[S] - thr[len(S)] for S in subsets))
    max_deg = {s: 0 for s in range(1, k + 1)}
    dangerous = {s: 0 for s in range(1, k + 1)}
    for S, deg in H.degree_index.items():
        s = len(S)
        max_deg[s] = max(max_deg[s], deg)
        if deg >= thr[s]:
            dangerous[s] += 1
    kk = params.k / 8
    report = {
        "family_size": len(F),
        "class_index": split.largest,
        "class_size": len(Fi),
        "candidates": len(candidates),
        "copies": len(H),
        "t": params.t,
        "k": params.k,
        "K_P": params.kp(P),
        "alpha": params.alpha,
        "mu": mu_value,
        "theory_bound": len(F) / (2 * params.t) * kk ** (2 * params.t * float(mu_value) * (k - 1)),
        "thresholds": thr,
        "dangerous_by_size": dangerous,
        "max_degree_by_size": max_deg,
        "cap_by_size": {s: params.cap(P, s, mu_value, 2) for s in thr},
        "cap_alpha_by_size": {s: params.cap(P, s, mu_value, params.alpha) for s in thr},
        "max_excess": max_excess if H.copies else 0,
        "invariant_holds": not H.copies or max_excess < 1,
        "p_free": not candidates,
    }
    return H, report


# -- gapped shift --------------------------------------------------------------

def gapped_copy_via_shift(F, P, t):
    """A t-gapped induced copy of P in the grid family F, built by shifting one element.

    F' holds the points with fewer than t points of F above them on their
    first-coordinate line; a copy inside F'' = F - F' has its element A (first
    coordinate maximal, then maximal in the order) replaced by the farthest
    point B on A's line.  Returns ``None`` when F'' has no copy of P.
    """
    if P.size < 2:
        raise ValueError("the shift needs |P| >= 2")
    if t < 1:
        raise ValueError("t must be at least 1")
    members = set(F.members)
    line_max = {}
    above = {}
    for p in F.members:
        rest = p[1:]
        above[p] = sum(1 for q in F.members if q[1:] == rest and q[0] > p[0])
        line_max[rest] = max(line_max.get(rest, 0), p[0])
    inner = F.subfamily(lambda p: above[p] >= t)
    copies = find_induced_copies(P, inner, limit=1)
    if not copies:
        return None
    images = list(copies[0].images)
    x = max(p[0] for p in images)
    top = [p for p in images if p[0] == x]
    A = max(p for p in top if not any(q != p and all(a <= b for a, b in zip(p, q)) for q in top))
    B = (line_max[A[1:]],) + A[1:]
    if B[0] < A[0] + t or B not in members:
        raise SwapVerificationError(f"no point t={t} beyond {A} on its line")
    images[images.index(A)] = B
    shifted = EmbeddingMap(F, tuple(images))
    if not is_induced_copy(P, shifted.images, F) or shifted.gap() < t:
        raise SwapVerificationError(f"shifted copy {shifted.images} is not a {t}-gapped copy of P")
    return shifted


# -- random subgrids -------------------------------------------------------------

def random_subgrid_check(sides, F, trials, seed, P=None, t=None, C_P=None):
    """Averaging over random n_1 x ... x n_1 subgrids of [n_1] x ... x [n_d].

    Reports the empirical mean of |F ∩ subgrid| against |F| prod(n_1/n_i).  With
    P and t, also compares the exact largest t-gapped-P-free family of the grid
    with ((C_P + t)/n_1)|G|; C_P defaults to ex*([n_1]^d, P)/n_1^(d-1).
    """
    sides = tuple(sides)
    if list(sides) != sorted(sides):
        raise RangeError("sides must be sorted increasingly")
    d = len(sides)
    n1 = sides[0]
    rng = as_rng(seed)
    pts = np.array(F.members, dtype=np.int64).reshape(-1, d) - 1
    sizes = np.empty(trials, dtype=np.int64)
    for s in range(trials):
        inside = np.ones(len(pts), dtype=bool)
        for i, ni in enumerate(sides):
            keep = np.zeros(ni, dtype=bool)
            keep[rng.choice(ni, size=n1, replace=False)] = True
            inside &= keep[pts[:, i]]
        sizes[s] = inside.sum()
    expectation = Fraction(len(F))
    for ni in sides:
        expectation *= Fraction(n1, ni)
    mean = float(sizes.mean())
    stderr = float(sizes.std(ddof=0)) / sqrt(trials)
    report = {
        "sides": sides,
        "family_size": len(F),
        "trials": trials,
        "mean": mean,
        "stderr": stderr,
        "expectation": expectation,
        "within_3sigma": abs(mean - float(expectation)) <= 3 * stderr + 1e-12,
    }
    if P is not None and t is not None:
        volume = int(np.prod(sides))
        if C_P is None:
            C_P = Fraction(ex_star((n1,) * d, P).value, n1 ** (d - 1))
        largest = ex_star_gapped(sides, P, t).value
        bound = (Fraction(C_P) + t) / n1 * volume
        report.update({"C_P": C_P, "ex_t": largest, "averaging_bound": bound,
                       "bound_holds": largest <= bound})
    return report


# -- pipeline -----------------------------------------------------------------------

def middle_window(n):
    """Sizes s with |s - n/2| <= 2 sqrt(n ln n)."""
    radius = 2 * sqrt(n * log(n)) if n > 1 else 0.0
    return [s for s in range(n + 1) if abs(s - n / 2) <= radius]


def _first_gapped_copy(P, host, t):
    matcher = matcher_for(P, host)
    allowed = (1 << len(host.members)) - 1
    for images in matcher.assignments(allowed):
        pts = [host.members[i] for i in images]
        if host_gap(host, pts) >= t:
            return pts
    return None


def supersat_pipeline(F, P, params=SupersatParams(), seed=0, L=None, t_prime=None,
                      exact_guard=config.GRID_EXACT_GUARD):
    """Extract t'-gapped copies of P grid by grid from a random permuted grid partition.

    In each grid, repeatedly find a t'-gapped copy of P inside the remaining
    part of F and delete its lexicographically least point.  Returns
    ``(copies, report)``; copies are :class:`EmbeddingMap` over the filtered family.
    """
    n = F.n
    d = params.d
    if t_prime is None:
        t_prime = params.t_prime
    sizes = set(middle_window(n))
    Fm = F.subfamily(lambda m: popcount(m) in sizes)
    if L is None:
        L = default_side_length(n, d, params.c)
    gp = permute_partition(grid_partition(n, d, L), seed=seed)
    groups = {}
    for A in Fm.members:
        j, coords = gp.locate(A)
        groups.setdefault(j, []).append(coords)
    copies = []
    rows = []
    for j in sorted(groups):
        sides = gp.grid_sides(j)
        remaining = sorted(groups[j])
        start = len(remaining)
        found = 0
        while True:
            host = GridFamily(sides, remaining)
            pts = _first_gapped_copy(P, host, t_prime)
            if pts is None:
                break
            copies.append(EmbeddingMap(Fm, tuple(gp.point(j, p) for p in pts)))
            found += 1
            least = min(pts)
            remaining = [p for p in remaining if p != least]
        volume = int(np.prod(sides))
        ex_t = guarantee = None
        if volume <= exact_guard:
            ex_t = ex_star_gapped(sides, P, t_prime).value
            guarantee = start - ex_t
        rows.append({"grid": j, "sides": sides, "members": start, "copies": found,
                     "ex_t": ex_t, "guarantee": guarantee,
                     "meets_guarantee": guarantee is None or found >= guarantee})
    tp = t_prime
    lower = (params.epsilon / (comb(tp + d - 1, d - 1) * factorial(tp) * 8 ** (tp + 1))
             * n ** tp * comb(n, n // 2))
    report = {
        "n": n, "d": d, "L": L, "t": params.t, "t_prime": tp, "K": params.K, "c": params.c,
        "C_P": params.C_P, "epsilon": params.epsilon, "seed": seed, "perm": gp.perm,
        "family_size": len(F), "filtered_size": len(Fm), "grids": len(gp),
        "side_violations": len(gp.violations), "per_grid": rows, "lambda": len(copies),
        "asymptotic_lower_bound": lower,
    }
    return copies, report

"""Brute-force reference implementations, written without the library's search code.

Everything here enumerates directly with itertools/numpy so it can serve as an
independent check on the optimized routines.
"""
import itertools
from math import comb

import numpy as np


def subsets(n):
    """All subsets of {0..n-1} as frozensets, by size then lexicographic."""
    out = []
    for r in range(n + 1):
        out += [frozenset(c) for c in itertools.combinations(range(n), r)]
    return out


def mask(s):
    return sum(1 << x for x in s)


def lt_matrix(k, pairs):
    """Transitive closure by repeated squaring of the relation."""
    lt = [[False] * k for _ in range(k)]
    for a, b in pairs:
        lt[a][b] = True
    changed = True
    while changed:
        changed = False
        for a in range(k):
            for b in range(k):
                if lt[a][b]:
                    for c in range(k):
                        if lt[b][c] and not lt[a][c]:
                            lt[a][c] = True
                            changed = True
    return lt


def set_lt(a, b):
    return a != b and a & b == a


def grid_lt(a, b):
    return a != b and all(x <= y for x, y in zip(a, b))


def naive_copies(P, elements, lt=set_lt):
    """Image sets of induced copies of P among ``elements`` (every injective map tried)."""
    k = P.size
    found = set()
    for combo in itertools.combinations(elements, k):
        for perm in itertools.permutations(combo):
            if all(lt(perm[x], perm[y]) == P.lt[x][y] for x in range(k) for y in range(k) if x != y):
                found.add(frozenset(combo))
                break
    return found


def naive_height(P):
    best = 1
    for r in range(2, P.size + 1):
        for c in itertools.combinations(range(P.size), r):
            if all(P.lt[a][b] or P.lt[b][a] for a, b in itertools.combinations(c, 2)):
                best = r
    return best


def naive_width(P):
    best = 1
    for r in range(2, P.size + 1):
        for c in itertools.combinations(range(P.size), r):
            if not any(P.lt[a][b] or P.lt[b][a] for a, b in itertools.combinations(c, 2)):
                best = r
    return best


def naive_linear_extensions(P):
    return [p for p in itertools.permutations(range(P.size))
            if all(not P.lt[p[j]][p[i]] for i in range(P.size) for j in range(i + 1, P.size))]


def naive_dimension(P):
    exts = naive_linear_extensions(P)
    pos = [{x: i for i, x in enumerate(e)} for e in exts]
    for d in range(1, len(exts) + 1):
        for combo in itertools.combinations(pos, d):
            ok = all(P.lt[a][b] == all(p[a] < p[b] for p in combo)
                     for a in range(P.size) for b in range(P.size) if a != b)
            if ok:
                return d
    return None


def naive_d_star(P, max_d=6):
    for d in range(0, max_d + 1):
        if naive_copies(P, list(range(1 << d))):
            return d
    return None


def naive_mu(P):
    from fractions import Fraction
    from posetfree import Poset
    best = None
    for r in range(2, P.size + 1):
        for c in itertools.combinations(range(P.size), r):
            sub = Poset(r, tuple(tuple(P.lt[a][b] for b in c) for a in c))
            v = Fraction(naive_d_star(sub), r - 1)
            best = v if best is None or v < best else best
    return best


def free_mask_array(n_elements, edges):
    """Boolean array over all 2^N subfamilies: True where no edge is contained."""
    fams = np.arange(1 << n_elements, dtype=np.int64)
    ok = np.ones(len(fams), dtype=bool)
    for e in edges:
        ok &= (fams & e) != e
    return fams, ok


def _edges(P, elements, lt):
    index = {x: i for i, x in enumerate(elements)}
    return [sum(1 << index[x] for x in c) for c in naive_copies(P, elements, lt)]


def brute_la_star(n, P):
    elements = list(range(1 << n))
    fams, ok = free_mask_array(len(elements), _edges(P, elements, set_lt))
    sizes = np.array([bin(int(f)).count("1") for f in fams[ok]])
    return int(sizes.max())


def brute_forb(n, P):
    elements = list(range(1 << n))
    _, ok = free_mask_array(len(elements), _edges(P, elements, set_lt))
    return int(ok.sum())


def brute_free_families(n, P):
    elements = list(range(1 << n))
    fams, ok = free_mask_array(len(elements), _edges(P, elements, set_lt))
    return [frozenset(elements[i] for i in range(len(elements)) if int(f) >> i & 1)
            for f in fams[ok]]


def grid_points(sides):
    return list(itertools.product(*(range(1, k + 1) for k in sides)))


def grid_gap(points):
    return sum(max(c) - min(c) for c in zip(*points))


def brute_ex_grid(sides, P, t=0):
    pts = grid_points(sides)
    index = {p: i for i, p in enumerate(pts)}
    edges = [sum(1 << index[p] for p in c) for c in naive_copies(P, pts, grid_lt)
             if grid_gap(c) >= t]
    fams, ok = free_mask_array(len(pts), edges)
    return max(bin(int(f)).count("1") for f in fams[ok])


def brute_interval_count(S, n, m):
    """Number of pairs A ⊆ B with |B - A| = m and A ⊆ X ⊆ B for all X in S."""
    count = 0
    for B in range(1 << n):
        A = B
        while True:
            if bin(B ^ A).count("1") == m and all(A & X == A and X & B == X for X in S):
                count += 1
            if A == 0:
                break
            A = (A - 1) & B
    return count


def interval_formula(n, m, d):
    from fractions import Fraction
    if d > m:
        return Fraction(0)
    return Fraction(comb(m, d), comb(n, d) * 2 ** (n - m))


def brute_independent_sets(v, edges):
    return [I for I in range(1 << v) if not any(e & I == e for e in edges)]


def greedy_replay(candidates, threshold):
    """Reference greedy: accepts a copy iff no nonempty subset has reached its threshold."""
    deg = {}
    accepted = []
    for copy in candidates:
        subs = [s for r in range(1, len(copy) + 1) for s in itertools.combinations(copy, r)]
        if any(deg.get(s, 0) >= threshold(len(s)) for s in subs):
            continue
        accepted.append(copy)
        for s in subs:
            deg[s] = deg.get(s, 0) + 1
    return accepted, deg

"""Hypergraph containers by max-degree fingerprinting, and the container tree for forb*."""
from __future__ import annotations

import itertools
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import config
from .embedding import copy_masks
from .errors import (EmptyHypergraphError, InfeasibleParamsWarning, RangeError, SizeGuardError,
                     VerificationError)
from .extremal import FreeSearch, forb_star_count, free_families, la_star
from .lattice import SetFamily, as_rng, format_family, full_lattice, popcount
from .poset import _bits, height
from .supersaturation import SupersatParams, greedy_balanced_collection


@dataclass(frozen=True)
class Hypergraph:
    """r-uniform hypergraph on vertices 0..v-1; edges stored as bitmasks."""

    v: int
    r: int
    edges: tuple

    def __post_init__(self):
        masks = []
        for e in self.edges:
            m = e if isinstance(e, int) else sum(1 << x for x in e)
            if m >> self.v:
                raise ValueError(f"edge 0x{m:x} uses a vertex outside 0..{self.v - 1}")
            if popcount(m) != self.r:
                raise ValueError(f"edge 0x{m:x} is not {self.r}-uniform")
            masks.append(m)
        if len(set(masks)) != len(masks):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", tuple(masks))

    @classmethod
    def from_masks(cls, v, masks):
        masks = sorted(set(masks))
        r = popcount(masks[0]) if masks else 1
        return cls(v, r, masks)

    def __len__(self):
        return len(self.edges)

    def is_independent(self, mask):
        return not any(e & ~mask == 0 for e in self.edges)


def max_degree(H, s):
    """Largest number of edges containing a common s-set."""
    if not 2 <= s <= H.r:
        raise RangeError(f"need 2 <= s <= r={H.r}, got {s}")
    counts = Counter()
    for e in H.edges:
        counts.update(itertools.combinations(tuple(_bits(e)), s))
    return max(counts.values(), default=0)


def copies_hypergraph(P, host, t=0):
    return Hypergraph.from_masks(len(host.members), copy_masks(P, host, t))


class _Run:
    """State of one fingerprinting run; decisions come from a membership oracle."""

    def __init__(self, H, cap):
        self.H = H
        self.cap = cap

    def run(self, in_set):
        """Returns (fingerprint mask, remaining-available mask)."""
        H = self.H
        available = (1 << H.v) - 1
        S = 0
        # Edges still alive, each kept as its part outside S.
        live = list(H.edges)
        while popcount(S) < self.cap:
            live = [e for e in live if e & ~available == 0]
            if not live:
                break
            deg = Counter()
            for e in live:
                for x in _bits(e):
                    deg[x] += 1
            u = min(deg, key=lambda x: (-deg[x], x))
            bit = 1 << u
            available &= ~bit
            if in_set(u):
                S |= bit
                shrunk = []
                for e in live:
                    if e & bit:
                        rest = e & ~bit
                        if rest & (rest - 1) == 0:
                            available &= ~rest
                        else:
                            shrunk.append(rest)
                    else:
                        shrunk.append(e)
                live = shrunk
        return S, available


@dataclass
class ContainerCertificate:
    """Fingerprints g, extensions f and containers g ∪ f(g) for one hypergraph."""

    H: Hypergraph
    tau: float
    A: float
    delta: float
    cap: int
    containers: dict = field(default_factory=dict)   # fingerprint mask -> f mask
    feasibility: dict = field(default_factory=dict)
    checked: int = 0
    exhaustive: bool = False

    def g(self, I):
        return _Run(self.H, self.cap).run(lambda u: I >> u & 1)[0]

    def f(self, S):
        return _Run(self.H, self.cap).run(lambda u: S >> u & 1)[1]

    def container(self, S):
        return S | self.f(S)

    def violations(self, independent_sets):
        """Independent sets breaking g ⊆ I ⊆ g ∪ f(g), the size cap or consistency."""
        bad = []
        by_fp = {}
        for I in independent_sets:
            S = self.g(I)
            if S & ~I or I & ~(S | self.f(S)) or popcount(S) > self.cap:
                bad.append(("containment", I, S))
            by_fp.setdefault(S, []).append(I)
        fps = list(by_fp)
        # g(I) ⊆ I' and g(I') ⊆ I must force g(I) = g(I').
        reach = {S: {T for T in fps if any(T & ~I == 0 for I in members)}
                 for S, members in by_fp.items()}
        for S, T in itertools.combinations(fps, 2):
            if T in reach[S] and S in reach[T]:
                bad.append(("consistency", S, T))
        return bad

    def verify(self, samples=2000, seed=0):
        """Exhaustive over independent sets when v <= 20, sampled otherwise."""
        if self.H.v <= config.CONTAINER_EXHAUSTIVE_V:
            sets = list(FreeSearch(self.H.v, self.H.edges).independent_sets())
            self.exhaustive = True
        else:
            rng = as_rng(seed)
            sets = []
            for _ in range(samples):
                order = rng.permutation(self.H.v)
                I = 0
                for u in order:
                    if self.H.is_independent(I | 1 << int(u)) and rng.random() < 0.5:
                        I |= 1 << int(u)
                sets.append(I)
            self.exhaustive = False
        bad = self.violations(sets)
        self.checked = len(sets)
        for S in {self.g(I) for I in sets}:
            self.containers.setdefault(S, self.f(S))
        if bad:
            raise VerificationError(f"{len(bad)} container violations, first {bad[0]}")
        return self


def _feasibility(H, tau, A, delta):
    v, r, e = H.v, H.r, len(H.edges)
    flags = {"tau_v_large": tau * v >= 1e8 * r ** 6 * A}
    for s in range(2, r + 1):
        flags[f"codegree_{s}"] = max_degree(H, s) <= A * (tau / (1e6 * r ** 5)) ** (s - 1) * e / v
    flags["delta"] = delta
    return flags


def enumerate_fingerprints(H, cap):
    """Every fingerprint the algorithm can produce, by branching on each decision."""
    out = []

    def rec(decisions):
        it = iter(decisions)
        seen = []

        def oracle(u):
            try:
                return next(it)
            except StopIteration:
                seen.append(u)
                raise _Branch

        try:
            S, avail = _Run(H, cap).run(oracle)
        except _Branch:
            rec(decisions + [True])
            rec(decisions + [False])
            return
        out.append((S, avail))

    rec([])
    return out


class _Branch(Exception):
    pass


def build_containers(H, tau=1.0, A=1.0, verify=True, samples=2000, seed=0):
    """Container certificate for a nonempty hypergraph.

    Each step takes the available vertex of largest degree in the current
    link hypergraph (lowest index on ties).  A vertex of I joins the
    fingerprint and every edge through it shrinks to its remainder; a remainder
    that is a single vertex removes that vertex.  A vertex outside I is simply
    deleted.  The run stops once no edge survives or the fingerprint reaches
    tau*v; what is still available is f of the fingerprint.
    """
    if not H.edges:
        raise EmptyHypergraphError("the hypergraph has no edges")
    delta = 1 / (1e3 * H.r ** 4 * A)
    cap = max(0, math.floor(tau * H.v))
    cert = ContainerCertificate(H, tau, A, delta, cap)
    cert.feasibility = _feasibility(H, tau, A, delta)
    if verify:
        cert.verify(samples, seed)
    small = sum(1 for f in cert.containers.values() if popcount(f) <= (1 - delta) * H.v)
    cert.feasibility["shrunk_containers"] = f"{small}/{len(cert.containers)}"
    if not all(v for k, v in cert.feasibility.items() if isinstance(v, bool)):
        warnings.warn("container parameters are outside the proven regime; "
                      "the contract is still verified directly", InfeasibleParamsWarning,
                      stacklevel=2)
    return cert


# -- container tree ------------------------------------------------------------

@dataclass
class TreeNode:
    index: int
    parent: int | None
    depth: int
    family: SetFamily
    k: float
    case: int = 1
    children: list = field(default_factory=list)
    flagged: bool = False


@dataclass
class ContainerTree:
    n: int
    pattern: object
    nodes: list
    C_P: float
    t: int

    @property
    def root(self):
        return self.nodes[0]

    @property
    def leaves(self):
        return [nd for nd in self.nodes if not nd.children]

    def covers(self, family):
        """True iff some leaf contains every member of ``family``."""
        want = set(family.members if isinstance(family, SetFamily) else family)
        return any(want <= set(leaf.family.members) for leaf in self.leaves)

    def to_text(self):
        lines = []

        def walk(i, indent):
            nd = self.nodes[i]
            flag = " flagged" if nd.flagged else ""
            lines.append(f"{'  ' * indent}case={nd.case} |F|={len(nd.family)} "
                         f"k={nd.k:.4g} children={len(nd.children)}{flag}")
            for c in nd.children:
                walk(c, indent + 1)

        walk(0, 0)
        return "\n".join(lines) + "\n"

    def leaves_text(self):
        return "".join(f"# leaf {nd.index}\n" + format_family(nd.family) for nd in self.leaves)


def _maximal(masks):
    masks = sorted(set(masks), key=lambda m: (-popcount(m), m))
    keep = []
    for m in masks:
        if not any(m & ~k == 0 for k in keep):
            keep.append(m)
    return keep


def container_tree(n, P, params=None, case1_k=1.0, case2_k=4.0, tau=1.0, A=1.0,
                   C_P=None, max_depth=config.CONTAINER_TREE_MAX_DEPTH, guard=None):
    """Rooted tree of subfamilies of 2^[n] whose leaves cover every P-free family.

    With |F| = k t C_P C(n, n/2): k < case1_k (or F free of copies) makes a
    leaf (case 1).  Otherwise the greedy collection of copies is taken from a
    prefix of F when k >= case2_k (case 2) or from all of F (case 3); the
    children are the maximal containers of that copy hypergraph.
    """
    if guard is None:
        guard = config.CONTAINER_TREE_CHAIN2_GUARD if (P.size == 2 and height(P) == 2) \
            else config.CONTAINER_TREE_GUARD
    if n > guard:
        raise SizeGuardError(f"container tree limited to n <= {guard} for this poset")
    params = params or SupersatParams()
    mid = comb(n, n // 2)
    if C_P is None:
        C_P = la_star(n, P).value / mid
    scale = params.t * C_P * mid
    nodes = [TreeNode(0, None, 0, full_lattice(n), (1 << n) / scale)]
    queue = [0]
    while queue:
        i = queue.pop(0)
        nd = nodes[i]
        F = nd.family
        if nd.k < case1_k or not copy_masks(P, F):
            nd.case = 1
            continue
        if nd.depth >= max_depth:
            nd.case, nd.flagged = 1, True
            continue
        if nd.k >= case2_k:
            nd.case = 2
            size = math.ceil(case2_k * scale)
            source = SetFamily(n, F.members[:size])
        else:
            nd.case = 3
            source = F
        coll, _ = greedy_balanced_collection(source, P, params)
        index = {m: j for j, m in enumerate(F.members)}
        edges = [sum(1 << index[x] for x in copy) for copy in coll.copies]
        if not edges:
            nd.case = 1
            continue
        H = Hypergraph.from_masks(len(F.members), edges)
        cap = max(0, math.floor(tau * H.v))
        found = [S | avail for S, avail in enumerate_fingerprints(H, cap)]
        for mask in _maximal(found):
            members = [F.members[j] for j in _bits(mask)]
            child = TreeNode(len(nodes), i, nd.depth + 1, SetFamily(n, members),
                             len(members) / scale)
            nodes.append(child)
            nd.children.append(child.index)
            queue.append(child.index)
    return ContainerTree(n, P, nodes, C_P, params.t)


def check_tree_coverage(tree):
    """P-free families of 2^[n] not contained in any leaf (empty when the tree is sound)."""
    missing = []
    leaves = [set(leaf.family.members) for leaf in tree.leaves]
    for fam in free_families(full_lattice(tree.n), tree.pattern):
        want = set(fam.members)
        if not any(want <= leaf for leaf in leaves):
            missing.append(fam)
    return missing


def forb_certificate(tree, n, P, exact=None):
    """(sum over leaves of 2^|leaf|, forb*(n, P), their ratio)."""
    upper = sum(1 << len(leaf.family) for leaf in tree.leaves)
    if exact is None:
        exact = forb_star_count(n, P)
    return upper, exact, Fraction(upper, exact)

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posetfree import EmptyHypergraphError, RangeError, standard_poset
from posetfree.containers import (Hypergraph, build_containers, check_tree_coverage,
                                  container_tree, copies_hypergraph, enumerate_fingerprints,
                                  forb_certificate, max_degree)
from posetfree.extremal import forb_star_count
from posetfree.lattice import full_lattice

import oracles

C2, C3, V = standard_poset("chain", 2), standard_poset("chain", 3), standard_poset("v")


def independent_contract(cert, v, edges):
    """Exhaustive contract check using a brute-force list of independent sets."""
    sets = oracles.brute_independent_sets(v, edges)
    classes = {}
    for I in sets:
        S = cert.g(I)
        f = cert.f(S)
        assert S & ~I == 0
        assert I & ~(S | f) == 0
        assert bin(S).count("1") <= cert.cap
        classes.setdefault(S, []).append(I)
    fps = list(classes)
    for S, T in itertools.combinations(fps, 2):
        s_in_t = any(S & ~I == 0 for I in classes[T])
        t_in_s = any(T & ~I == 0 for I in classes[S])
        assert not (s_in_t and t_in_s)
    return len(sets)


def test_hypergraph_validation():
    with pytest.raises(ValueError):
        Hypergraph(3, 2, [0b111])
    with pytest.raises(ValueError):
        Hypergraph(3, 2, [0b011, 0b011])
    H = Hypergraph(4, 2, [(0, 1), (2, 3)])
    assert H.edges == (0b0011, 0b1100)


def test_max_degree_examples():
    assert max_degree(Hypergraph(3, 3, [0b111]), 3) == 1
    pairs = Hypergraph(4, 2, [sum(1 << x for x in c) for c in itertools.combinations(range(4), 2)])
    assert max_degree(pairs, 2) == 1
    H = copies_hypergraph(C2, full_lattice(3))
    assert len(H) == 19 and max_degree(H, 2) == 1
    with pytest.raises(RangeError):
        max_degree(H, 3)


def test_empty_hypergraph_rejected():
    with pytest.raises(EmptyHypergraphError):
        build_containers(Hypergraph(3, 2, []))


def test_empty_independent_set():
    H = copies_hypergraph(C2, full_lattice(3))
    cert = build_containers(H)
    assert cert.g(0) == 0
    assert cert.checked == 20 and cert.exhaustive


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 12), st.sampled_from([2, 3]), st.floats(0.05, 0.5), st.floats(0.2, 1.0),
       st.integers(0, 2**32))
def test_contract_on_random_hypergraphs(v, r, p, tau, seed):
    rng = np.random.default_rng(seed)
    edges = [sum(1 << x for x in c) for c in itertools.combinations(range(v), r)
             if rng.random() < p]
    if not edges:
        return
    H = Hypergraph(v, r, edges)
    cert = build_containers(H, tau=tau)
    assert independent_contract(cert, v, H.edges) == cert.checked


def test_fingerprints_deterministic():
    H = copies_hypergraph(V, full_lattice(3))
    a, b = build_containers(H), build_containers(H)
    assert a.containers == b.containers
    assert enumerate_fingerprints(H, a.cap) == enumerate_fingerprints(H, b.cap)


def test_enumerated_fingerprints_cover_realized_ones():
    H = copies_hypergraph(C3, full_lattice(3))
    cert = build_containers(H)
    all_fp = {S for S, _ in enumerate_fingerprints(H, cert.cap)}
    assert set(cert.containers) <= all_fp


def test_tree_trivial_root_leaf():
    tree = container_tree(3, C2, case1_k=100.0)
    assert len(tree.nodes) == 1 and tree.root.case == 1
    upper, exact, ratio = forb_certificate(tree, 3, C2)
    assert upper == 2 ** 8 and exact == 20 and ratio >= 1


@pytest.mark.parametrize("n,P", [(3, C2), (4, C2), (3, C3), (3, V), (4, C3), (4, V)])
def test_tree_coverage(n, P):
    tree = container_tree(n, P)
    assert check_tree_coverage(tree) == []
    free = oracles.brute_free_families(n, P)
    leaves = [set(leaf.family.members) for leaf in tree.leaves]
    assert all(any(f <= leaf for leaf in leaves) for f in free)
    upper, exact, ratio = forb_certificate(tree, n, P)
    assert exact == len(free) and upper >= exact and ratio >= 1
    for nd in tree.nodes:
        if nd.parent is not None:
            assert set(nd.family.members) <= set(tree.nodes[nd.parent].family.members)


def test_tree_export():
    tree = container_tree(3, C2)
    text = tree.to_text()
    assert text.splitlines()[0].startswith("case=")
    assert len(text.splitlines()) == len(tree.nodes)
    assert tree.leaves_text().count("# leaf") == len(tree.leaves)

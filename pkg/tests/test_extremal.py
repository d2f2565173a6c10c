import time
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from posetfree import SizeGuardError, SolverTimeout, standard_poset
from posetfree.embedding import find_induced_copies, full_grid
from posetfree.extremal import (FreeSearch, ex_star, ex_star_gapped, forb_star_count,
                                free_families, is_free, la_star)
from posetfree.lattice import full_lattice
from posetfree.poset import all_catalog_posets, random_poset

import oracles

C2, C3, A2, V = (standard_poset("chain", 2), standard_poset("chain", 3),
                 standard_poset("antichain", 2), standard_poset("v"))
SMALL = [P for P in all_catalog_posets(4)]


def test_la_star_examples():
    assert la_star(4, C2).value == 6
    assert la_star(4, C3).value == 10
    assert la_star(3, standard_poset("chain", 1)).value == 0


@pytest.mark.parametrize("P", SMALL, ids=repr)
def test_la_star_against_brute_force(P):
    for n in range(1, 4):
        res = la_star(n, P)
        assert res.value == oracles.brute_la_star(n, P)
        assert res.exact and len(res.witness) == res.value
        assert is_free(P, res.witness)


def test_la_star_n4_brute_force():
    for P in (C2, V, A2):
        assert la_star(4, P).value == oracles.brute_la_star(4, P)


def test_la_star_chains_two_middle_sums():
    for n in range(1, 6):
        for k in range(2, 5):
            top = sorted((comb(n, i) for i in range(n + 1)), reverse=True)[:k - 1]
            assert la_star(n, standard_poset("chain", k)).value == sum(top)


def test_la_star_monotone_and_guard():
    for P in (C2, V):
        vals = [la_star(n, P).value for n in range(1, 6)]
        assert vals == sorted(vals)
    with pytest.raises(SizeGuardError):
        la_star(6, V)


def test_ex_star_examples():
    assert ex_star((3, 3), C2).value == 3
    for n in range(1, 7):
        assert ex_star((n,), C2).value == 1
    assert ex_star((2, 2), A2).value == oracles.brute_ex_grid((2, 2), A2) == 3


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3), (4,), (2, 2, 2), (2, 5), (6,)]),
       st.sampled_from(SMALL), st.integers(0, 3))
def test_grid_values_against_brute_force(sides, P, t):
    res = ex_star_gapped(sides, P, t)
    assert res.value == oracles.brute_ex_grid(sides, P, t)
    assert is_free(P, res.witness, t) and len(res.witness) == res.value


def test_ex_star_gapped_examples():
    assert ex_star_gapped((5,), C2, 2).value == 2
    assert ex_star_gapped((5,), C2, 10).value == 5
    for sides in [(2, 3), (3, 3), (4,)]:
        for P in (C2, V, A2):
            assert ex_star_gapped(sides, P, 1).value == ex_star(sides, P).value
            vals = [ex_star_gapped(sides, P, t).value for t in range(5)]
            assert vals == sorted(vals)


def test_forb_examples_and_oracle():
    assert [forb_star_count(n, C2) for n in (2, 3, 4)] == [6, 20, 168]
    for P in SMALL:
        for n in (1, 2, 3):
            assert forb_star_count(n, P) == oracles.brute_forb(n, P)


def test_forb_at_least_subfamilies_of_witness():
    for P in (C2, C3, V):
        for n in range(1, 5):
            assert forb_star_count(n, P) >= 2 ** la_star(n, P).value


def test_forb_timeout_and_guard():
    with pytest.raises(SolverTimeout) as info:
        forb_star_count(5, C3, timeout=0.05)
    assert info.value.lower_bound > 0
    with pytest.raises(SizeGuardError):
        forb_star_count(6, C2)


def test_free_families_enumeration():
    fams = list(free_families(full_lattice(3), C2))
    assert len(fams) == 20
    assert {frozenset(f.members) for f in fams} == set(oracles.brute_free_families(3, C2))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9).flatmap(lambda v: st.tuples(
    st.just(v), st.lists(st.integers(1, (1 << v) - 1), max_size=8, unique=True))))
def test_free_search_on_random_hypergraphs(args):
    v, edges = args
    search = FreeSearch(v, edges)
    brute = oracles.brute_independent_sets(v, edges)
    assert search.count() == len(brute)
    assert sorted(search.independent_sets()) == brute
    size, mask, exact = search.maximum()
    assert exact and size == max(bin(I).count("1") for I in brute)
    assert search.is_free(mask)


def test_la_star_chain_bigger_n_runs():
    t = time.monotonic()
    assert la_star(7, C2).value == 35
    assert time.monotonic() - t < 30

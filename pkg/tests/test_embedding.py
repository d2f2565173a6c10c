from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from posetfree import GridFamily, SetFamily, SizeGuardError, standard_poset
from posetfree.embedding import (EmbeddingMap, automorphism_count, copy_masks,
                                 count_induced_copies, d_star, embeds_in_cube,
                                 find_induced_copies, format_grid, full_grid, is_induced_copy,
                                 is_t_gapped, mu, parse_grid_text)
from posetfree.lattice import full_lattice, set_to_mask
from posetfree.poset import Poset, all_catalog_posets, induced_hom_check, random_poset

import oracles

C2, C3, A2 = standard_poset("chain", 2), standard_poset("chain", 3), standard_poset("antichain", 2)


def test_find_copies_examples():
    copies = find_induced_copies(C2, full_lattice(2))
    assert len(copies) == 5
    assert {c.image_set for c in copies} == {frozenset(p) for p in
                                              [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]}
    antichain = SetFamily(3, [0b001, 0b010, 0b100])
    assert find_induced_copies(C2, antichain) == []
    chain = SetFamily(2, [0, 0b01, 0b11])
    assert find_induced_copies(A2, chain) == []
    assert len(find_induced_copies(C2, full_lattice(3), limit=4)) == 4


def test_count_examples():
    assert count_induced_copies(C2, full_lattice(3)) == 19
    assert count_induced_copies(C3, SetFamily(3, [0, 1, 3, 7])) == 4
    assert count_induced_copies(A2, SetFamily(3, [0, 1, 3, 7])) == 0
    for n in range(1, 7):
        assert count_induced_copies(C2, full_lattice(n)) == 3 ** n - 2 ** n


def test_copies_pass_hom_check():
    for P in all_catalog_posets(4):
        host = full_lattice(3)
        Q = Poset.from_family(host.members)
        index = {m: i for i, m in enumerate(host.members)}
        for c in find_induced_copies(P, host):
            assert induced_hom_check([index[x] for x in c.images], P, Q)
            assert is_induced_copy(P, c.images, host)


@settings(max_examples=60, deadline=None)
@given(st.builds(random_poset, st.integers(1, 4), st.floats(0, 1), st.integers(0, 10**6)),
       st.lists(st.integers(0, 15), min_size=0, max_size=10, unique=True))
def test_copies_against_brute_force(P, members):
    host = SetFamily(4, members)
    ours = {c.image_set for c in find_induced_copies(P, host)}
    assert ours == oracles.naive_copies(P, members)
    assert count_induced_copies(P, host) == len(ours)


@settings(max_examples=40, deadline=None)
@given(st.builds(random_poset, st.integers(1, 4), st.floats(0, 1), st.integers(0, 10**6)),
       st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), max_size=9, unique=True))
def test_grid_copies_against_brute_force(P, points):
    host = GridFamily((3, 3), points)
    ours = {c.image_set for c in find_induced_copies(P, host)}
    assert ours == oracles.naive_copies(P, points, oracles.grid_lt)


def test_automorphisms():
    assert automorphism_count(A2) == 2
    assert automorphism_count(C3) == 1
    assert automorphism_count(standard_poset("boolean", 2)) == 2
    assert automorphism_count(standard_poset("butterfly")) == 4


def test_gapped_examples():
    host = full_lattice(3)
    assert is_t_gapped(EmbeddingMap(host, (0, 0b111)), 3)
    grid = full_grid((3, 3))
    assert not is_t_gapped(EmbeddingMap(grid, ((1, 1), (2, 1))), 2)
    for c in find_induced_copies(C2, host):
        assert is_t_gapped(c, 1)
    gapped = copy_masks(C2, host, t=2)
    assert len(gapped) == 19 - 12  # the 12 cover pairs have gap 1


def test_d_star_examples():
    assert d_star(C3) == 2
    assert d_star(A2) == 2
    assert d_star(standard_poset("boolean", 2)) == 2
    assert not embeds_in_cube(A2, 1)
    with pytest.raises(SizeGuardError):
        d_star(standard_poset("antichain", 9))


@pytest.mark.parametrize("P", [P for P in all_catalog_posets(5) if P.size <= 4], ids=repr)
def test_d_star_against_brute_force(P):
    assert d_star(P) == oracles.naive_d_star(P)


def test_d_star_equals_min_gap_over_embeddings():
    # minimum of d(phi(P)) over every embedding into 2^[5]
    host = full_lattice(5)
    for P in [P for P in all_catalog_posets(4) if P.size <= 4]:
        gaps = [c.gap() for c in find_induced_copies(P, host)]
        assert min(gaps) == d_star(P)


def test_mu_examples():
    for k in range(2, 6):
        assert mu(standard_poset("chain", k)) == 1
    assert mu(standard_poset("boolean", 2)) == Fraction(2, 3)
    assert mu(A2) == 2
    with pytest.raises(SizeGuardError):
        mu(standard_poset("chain", 8))


@pytest.mark.parametrize("P", [P for P in all_catalog_posets(4)], ids=repr)
def test_mu_against_brute_force(P):
    assert mu(P) == oracles.naive_mu(P)


def test_grid_text_round_trip():
    G = GridFamily((2, 3), [(1, 1), (2, 3)])
    assert parse_grid_text(format_grid(G)) == G
    with pytest.raises(ValueError):
        GridFamily((2, 2), [(3, 1)])
    with pytest.raises(ValueError):
        parse_grid_text("3 2 2\n1,1\n")
    assert len(full_grid((2, 3, 2))) == 12

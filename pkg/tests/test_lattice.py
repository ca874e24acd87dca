from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from togglelab.diagrams import Diagram, rectangle, shifted_staircase, type_a_root, type_b_root
from togglelab.errors import CapExceeded, NotAnAntichain, NotAnIdeal
from togglelab.lattice import (
    IdealLattice,
    enumerate_ideals,
    ideal_of_antichain,
    is_d_mesic,
    max_elements,
    orbit_sums,
    orbits,
    rowmotion,
)
from togglelab.poset import Poset, poset_from_diagram
from togglelab.statistics import constant, tog

cell_sets = st.sets(st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=10)


def lattice_of(d):
    p = poset_from_diagram(d)
    return p, enumerate_ideals(p)


def as_label_sets(p, lattice):
    return {frozenset(p.label_set(I)) for I in lattice}


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def test_single_element():
    p, L = lattice_of(Diagram([(1, 1)]))
    assert L.ideals == (0, 1)
    assert [len(o) for o in orbits(p, L)] == [2]


def test_small_counts_against_brute_force():
    for d in (rectangle(2, 2), type_a_root(2)):
        p, L = lattice_of(d)
        assert as_label_sets(p, L) == set(oracles.brute_ideals(d.cells))
    assert len(lattice_of(rectangle(2, 2))[1]) == 6
    assert len(lattice_of(type_a_root(2))[1]) == 5


@given(cell_sets)
def test_ideals_match_brute_force(cells):
    p, L = lattice_of(Diagram(cells))
    brute = oracles.brute_ideals(cells)
    assert len(L) == len(brute)
    assert as_label_sets(p, L) == set(brute)


@given(cell_sets)
def test_lattice_invariants(cells):
    p, L = lattice_of(Diagram(cells))
    assert L.ideals[0] == 0 and L.ideals[-1] == p.full
    assert list(L.ideals) == sorted(set(L.ideals))
    assert sum(len(o) for o in L.orbits) == len(L)


@pytest.mark.parametrize("m,n", [(2, 2), (2, 5), (3, 4), (4, 4), (5, 5)])
def test_rectangle_counts(m, n):
    assert len(lattice_of(rectangle(m, n))[1]) == comb(m + n, m)


@pytest.mark.parametrize("n", range(2, 7))
def test_family_counts(n):
    assert len(lattice_of(type_a_root(n))[1]) == catalan(n + 1)
    assert len(lattice_of(shifted_staircase(n))[1]) == 2**n
    if n <= 5:
        assert len(lattice_of(type_b_root(n))[1]) == comb(2 * n, n)


def test_grown_ideals_oracle_agrees_on_families():
    for d in (type_a_root(5), type_b_root(4), shifted_staircase(5)):
        p, L = lattice_of(d)
        assert as_label_sets(p, L) == set(oracles.grown_ideals(d.cells))


def test_antichain_round_trip_type_b():
    p, L = lattice_of(type_b_root(3))
    for I in L:
        assert ideal_of_antichain(p, max_elements(p, I)) == I


def test_antichain_examples():
    p = poset_from_diagram(rectangle(2, 2))
    assert ideal_of_antichain(p, []) == 0
    assert max_elements(p, []) == 0
    got = ideal_of_antichain(p, [(1, 2), (2, 1)])
    assert set(p.label_set(got)) == {(1, 1), (1, 2), (2, 1)}
    with pytest.raises(NotAnAntichain):
        ideal_of_antichain(p, [(1, 1), (2, 2)])
    with pytest.raises(NotAnIdeal):
        max_elements(p, [(2, 2)])


def test_rowmotion_basics():
    p, L = lattice_of(rectangle(2, 3))
    assert rowmotion(p, p.full) == 0
    assert rowmotion(p, 0) == p.minimals
    with pytest.raises(NotAnIdeal):
        rowmotion(p, [(2, 3)])


@given(cell_sets)
def test_rowmotion_matches_oracle(cells):
    p, L = lattice_of(Diagram(cells))
    for I in L:
        expected = oracles.rowmotion(cells, frozenset(p.label_set(I)))
        assert frozenset(p.label_set(rowmotion(p, I))) == expected


def test_square_orbits():
    p, L = lattice_of(rectangle(2, 2))
    assert sorted(len(o) for o in orbits(p, L)) == [2, 4]
    assert L.orbit_report() == {"orbit_sizes": [2, 4], "num_ideals": 6}


def test_orbits_follow_rowmotion():
    p, L = lattice_of(type_a_root(4))
    for o in L.orbits:
        for a, b in zip(o.ideals, o.ideals[1:] + o.ideals[:1]):
            assert rowmotion(p, L.ideals[a]) == L.ideals[b]
        assert len(set(o.ideals)) == len(o)
    assert [o.ideals[0] for o in L.orbits] == sorted(o.ideals[0] for o in L.orbits)
    assert all(o.ideals[0] == min(o.ideals) for o in L.orbits)


def test_orbit_cycles_listing():
    _, L = lattice_of(rectangle(2, 2))
    report = L.orbit_report(cycles=True)
    assert report["cycles"][0][0] == []
    assert sum(len(c) for c in report["cycles"]) == 6


def test_tables_match_definitions():
    p, L = lattice_of(type_b_root(3))
    cells = list(p.labels)
    for t, I in enumerate(L):
        labels = frozenset(p.label_set(I))
        for k, c in enumerate(cells):
            assert L.member[t, k] == oracles.value(cells, "ind", c, labels)
            assert L.removable[t, k] == oracles.value(cells, "aminus", c, labels)
            assert L.addable[t, k] == oracles.value(cells, "aplus", c, labels)


def test_tables_read_only():
    _, L = lattice_of(rectangle(2, 2))
    with pytest.raises(ValueError):
        L.member[0, 0] = 5


def test_large_poset_tables_fallback():
    chain = Poset(range(70), [(k, k + 1) for k in range(69)])
    L = enumerate_ideals(chain, max_elements=100)
    assert len(L) == 71
    toggles = L.addable - L.removable
    assert toggles.shape == (71, 70)
    assert int(np.abs(toggles).sum()) == 2 * 70


def test_caps():
    p = poset_from_diagram(rectangle(4, 4))
    with pytest.raises(CapExceeded) as exc:
        enumerate_ideals(p, cap=20)
    assert exc.value.reached > 20
    with pytest.raises(CapExceeded):
        enumerate_ideals(p, max_elements=10)


def test_cap_from_environment(monkeypatch):
    p = poset_from_diagram(rectangle(4, 4))
    monkeypatch.setenv("TOGGLELAB_CAP", "30")
    with pytest.raises(CapExceeded):
        enumerate_ideals(p)
    monkeypatch.setenv("TOGGLELAB_ELEMENT_CAP", "5")
    with pytest.raises(CapExceeded):
        enumerate_ideals(p, cap=10**6)


def test_position():
    p, L = lattice_of(rectangle(2, 2))
    assert L.position([]) == 0
    with pytest.raises(NotAnIdeal):
        L.position([(2, 2)])


@pytest.mark.parametrize("d", [rectangle(3, 3), type_a_root(4), type_b_root(3), shifted_staircase(4)])
def test_toggles_are_zero_mesic(d):
    p, L = lattice_of(d)
    for k in range(len(p)):
        assert is_d_mesic(L, tog(k), 0)
    assert is_d_mesic(L, constant(), 1)
    assert not is_d_mesic(L, constant(), Fraction(1, 2))


def test_orbit_sums_of_a_vector():
    _, L = lattice_of(rectangle(2, 2))
    assert sorted(orbit_sums(L, [1] * len(L))) == [2, 4]


def test_mismatched_lattice():
    p, L = lattice_of(rectangle(2, 2))
    q = poset_from_diagram(rectangle(2, 3))
    with pytest.raises(ValueError):
        orbits(q, L)


def test_orbits_for_foreign_lattice_type():
    p = poset_from_diagram(rectangle(1, 2))
    L = IdealLattice(p, [0, 1, 3])
    assert [len(o) for o in L.orbits] == [3]

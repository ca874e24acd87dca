from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from togglelab import spaces
from togglelab.diagrams import (
    Diagram,
    Partition,
    diagram_from_text,
    partitions,
    rectangle,
    shifted_staircase,
    type_a_root,
    type_b_root,
)
from togglelab.errors import BadParameter, ConditionsFail, NotADiamond, NotInSpan, UnknownFamily
from togglelab.lattice import orbit_sums
from togglelab.poset import poset_from_diagram
from togglelab.statistics import AMINUS, IND, TOG, as_vector, constant, ind, tog

cell_sets = st.sets(st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=8)

DIAMOND = "..###.\n.#####\n##...."
ROOT_ZERO = "..#\n..#\n###"


def poset(d):
    return poset_from_diagram(d)


def lattice(d):
    return spaces.lattice_for(poset(d))


def by_label(p, f, kind):
    return {p.labels[e]: c for e, c in f.support(kind).items()}


class TestDimensions:
    @given(cell_sets)
    @settings(max_examples=40)
    def test_against_rank_formula_oracle(self, cells):
        L = lattice(Diagram(cells))
        assert (spaces.dim_IT(L), spaces.dim_AT(L)) == oracles.toggle_space_dims(cells)

    @pytest.mark.parametrize(
        "d",
        [rectangle(2, 2), rectangle(2, 3), type_a_root(3), shifted_staircase(3), type_b_root(2)],
        ids=["rect22", "rect23", "typeA3", "stair3", "typeB2"],
    )
    def test_families_against_oracle(self, d):
        L = lattice(d)
        assert (spaces.dim_IT(L), spaces.dim_AT(L)) == oracles.toggle_space_dims(d.cells)

    def test_named_values(self):
        assert spaces.dim_IT(poset(rectangle(3, 4))) == spaces.dim_AT(poset(rectangle(3, 4))) == 6
        assert spaces.dim_IT(poset(type_a_root(5))) == 5
        assert spaces.dim_AT(poset(type_b_root(3))) == 5
        assert spaces.dim_IT(poset(shifted_staircase(4))) == 7

    def test_single_cell(self):
        L = lattice(Diagram([(1, 1)]))
        assert spaces.dim_IT(L) == spaces.dim_AT(L) == 1

    def test_basis_vectors_are_members(self):
        for d in (rectangle(3, 3), type_b_root(3)):
            L = lattice(d)
            for vec in spaces.basis_IT(L):
                assert spaces.in_IT(L, vec)
            for vec in spaces.basis_AT(L):
                assert spaces.in_AT(L, vec)

    def test_membership_rejects(self):
        p = poset(rectangle(2, 2))
        L = spaces.lattice_for(p)
        assert not spaces.in_IT(L, ind(p.element((1, 1))))
        assert spaces.in_IT(L, ind(p.element((1, 1))) + ind(p.element((2, 2))))
        assert not spaces.in_AT(L, tog(0))

    def test_decompositions_reproduce_basis(self):
        L = lattice(type_a_root(4))
        space = spaces.order_ideal_space(L)
        assert len(space.decompositions) == space.dim
        for vec, f in zip(space.basis, space.statistics()):
            assert list(vec) == as_vector(L, f)

    def test_partition_dims(self):
        got = spaces.partition_dims(Partition([5, 2, 1, 1]))
        assert (got.N, got.C, got.dim_formula, got.dim_IT, got.dim_AT) == (8, 2, 6, 6, 6)
        assert got.match
        single = spaces.partition_dims(Partition([1]))
        assert (single.dim_IT, single.dim_formula) == (1, 1)

    def test_small_partitions_match(self):
        for k in range(1, 7):
            for lam in partitions(k):
                assert spaces.partition_dims(lam).match, lam


class TestDecompose:
    def test_toggle_and_constant(self):
        p = poset(rectangle(2, 3))
        L = spaces.lattice_for(p)
        dec = spaces.decompose_toggle(L, as_vector(L, 3 * tog(2) - constant(2)))
        assert dec.constant == -2 and dec.coeffs == {2: 3}
        assert dec.statistic() == 3 * tog(2) - constant(2)
        assert dec.by_label(p) == {(1, 3): 3}

    def test_diagonal_statistic(self):
        p = poset(rectangle(3, 4))
        L = spaces.lattice_for(p)
        dec = spaces.decompose_toggle(L, as_vector(L, spaces.diagonal_statistic(p, 0)))
        assert dec.constant == -1
        assert set(dec.by_label(p)) == {(1, 1), (2, 2), (3, 3)}

    def test_not_in_span(self):
        p = poset(rectangle(2, 2))
        L = spaces.lattice_for(p)
        with pytest.raises(NotInSpan):
            spaces.decompose_toggle(L, as_vector(L, ind(0)))
        with pytest.raises(BadParameter):
            spaces.decompose_toggle(L, [1, 2])


class TestDiamond:
    def test_witness_sets(self):
        p = poset(diagram_from_text(DIAMOND))
        check = spaces.check_diamond(p, (1, 3), (2, 3), (1, 4), (2, 4))
        s1, s2, s3, s6 = (3, 1), (3, 2), (2, 2), (1, 5)
        p3, p4 = (1, 4), (2, 4)
        w = check.witness_sets
        assert w["S1"] == {s1, s3, p3}
        assert w["S2"] == {s1, p3}
        assert w["S3"] == {s1, s3, s6}
        assert w["S23"] == {s1, s6, p4}
        assert w["S2_1"] == set()
        assert w["S3_1"] == {s6}
        assert w["S23_rest"] == {s1}
        assert w["S2_cap_S1_minus_S23"] == {p3}
        assert w["S3_cap_S1_minus_S23"] == {s3}
        assert check.hypotheses_hold and check.primed_hold and check.agree
        assert s2 not in set().union(*w.values())

    def test_not_a_diamond(self):
        p = poset(rectangle(2, 2))
        with pytest.raises(NotADiamond):
            spaces.check_diamond(p, (1, 1), (1, 2), (1, 2), (2, 2))
        with pytest.raises(NotADiamond):
            spaces.check_diamond(p, (1, 1), (1, 2), (2, 1), (1, 1))

    def test_conditions_agree_on_families(self):
        for d in (rectangle(3, 4), type_a_root(4), type_b_root(3), shifted_staircase(4)):
            p = poset(d)
            for q in spaces.diamonds(p):
                assert spaces.check_diamond(p, *q).agree

    def test_diamond_listing(self):
        assert len(spaces.diamonds(poset(rectangle(2, 2)))) == 1
        assert len(spaces.diamonds(poset(rectangle(3, 4)))) == 6


class TestRootZero:
    def test_small_example(self):
        p = poset(diagram_from_text(ROOT_ZERO))
        assert spaces.check_root_zero(p, (3, 3), (3, 2), (2, 3))

    def test_shared_lower_element_fails(self):
        p = poset(rectangle(2, 2))
        assert not spaces.check_root_zero(p, (2, 2), (1, 2), (2, 1))

    @pytest.mark.parametrize("family,n,total", [("typeA", 4, 6), ("typeB", 3, 7)])
    def test_cells_have_zero_coefficient(self, family, n, total):
        cells = spaces.root_zero_cells(family, n)
        assert cells and all(c.row + c.col == total for c in cells)
        p = poset(type_a_root(n) if family == "typeA" else type_b_root(n))
        space = spaces.order_ideal_space(p)
        for dec in space.decompositions:
            assert all(dec.coefficient(p.element(c)) == 0 for c in cells)

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            spaces.root_zero_cells("rect", 3)


class TestDiagonals:
    def test_statistic_shapes(self):
        p = poset(rectangle(3, 4))
        assert spaces.diagonal_statistic(p, 0) == sum(
            (tog(p.element(c)) for c in [(1, 1), (2, 2), (3, 3)]), constant(-1)
        )
        assert spaces.diagonal_statistic(p, -2) == tog(p.element((1, 3))) + tog(p.element((2, 4)))

    @pytest.mark.parametrize("k", range(-2, 2))
    def test_indicator_form_agrees(self, k):
        p = poset(rectangle(3, 4))
        L = spaces.lattice_for(p)
        assert as_vector(L, spaces.diagonal_statistic(p, k)) == as_vector(L, spaces.diagonal_indicator_form(p, k))

    def test_indicator_form_coefficients(self):
        p = poset(rectangle(3, 4))
        f = spaces.diagonal_indicator_form(p, -2)
        assert by_label(p, f, IND) == {(1, 3): -2, (2, 4): -2, (1, 2): 1, (2, 3): 1, (1, 4): 1, (3, 4): 1}

    @pytest.mark.parametrize("k", [-3, 2])
    def test_edge_diagonals_rejected(self, k):
        p = poset(rectangle(3, 4))
        cond = spaces.diagonal_conditions(p, k)
        assert not cond.ok and cond.notes
        with pytest.raises(ConditionsFail):
            spaces.diagonal_statistic(p, k)

    def test_nonconvex_rejected(self):
        p = poset(diagram_from_text("####\n###.\n####\n#.#."))
        assert not spaces.diagonal_conditions(p, 0).ok


def support_with_constant(p, f, kind):
    return frozenset(by_label(p, f, kind).items()), f.constant


class TestBases:
    def test_toggle_basis_for_small_type_b(self):
        p = poset(type_b_root(3))
        got = {support_with_constant(p, f, TOG) for f in spaces.basis_B1("typeB", (3,))}
        expected = {
            (frozenset({((5, 1), 1)}), -1),
            (frozenset({((5, 3), 1), ((4, 2), 1)}), -1),
            (frozenset({((3, 3), 1)}), -1),
            (frozenset({((4, 4), 1)}), 0),
            (frozenset({((5, 5), 1)}), 0),
        }
        assert got == expected

    def test_indicator_basis_for_small_type_b(self):
        p = poset(type_b_root(3))
        got = {frozenset(by_label(p, f, IND).items()) for f in spaces.basis_B2("typeB", (3,))}
        panels = [
            {(5, 1): 2, (5, 2): -1},
            {(5, 2): -1, (5, 3): 2, (5, 4): -1, (4, 2): 2, (4, 3): -1},
            {(4, 3): -1, (3, 3): 2},
            {(5, 4): -1, (4, 3): -1, (4, 4): 2},
            {(5, 4): -1, (5, 5): 2},
        ]
        assert got == {frozenset(panel.items()) for panel in panels}

    def test_bases_describe_the_same_statistics(self):
        L = lattice(type_b_root(3))
        one = [as_vector(L, f) for f in spaces.basis_B1("typeB", (3,))]
        two = [as_vector(L, f) for f in spaces.basis_B2("typeB", (3,))]
        assert oracles.fraction_rank(one) == oracles.fraction_rank(two) == oracles.fraction_rank(one + two) == 5

    def test_square_indicator_basis(self):
        p = poset(rectangle(2, 2))
        got = [by_label(p, f, IND) for f in spaces.basis_B2("rect", (2, 2))]
        assert got == [{(1, 2): 1}, {(1, 1): 1, (2, 2): 1}, {(2, 1): 1}]
        assert spaces.check_basis("rect", (2, 2), "B2").passed

    @pytest.mark.parametrize(
        "family,params",
        [("rect", (3, 4)), ("staircase", (4,)), ("typeA", (5,)), ("typeB", (4,))],
    )
    @pytest.mark.parametrize("which", ["B1", "B2"])
    def test_check_basis(self, family, params, which):
        check = spaces.check_basis(family, params, which)
        assert check.passed
        assert check.size == spaces.predicted_dimension(family, params)

    def test_check_basis_errors(self):
        with pytest.raises(BadParameter):
            spaces.check_basis("rect", (2, 2), "B3")
        with pytest.raises(UnknownFamily):
            spaces.basis_B1("typeC", (3,))

    def test_family_aliases(self):
        assert spaces.basis_B1("rectangle", (2, 3)) == spaces.basis_B1("rect", (2, 3))


class TestTridiagonal:
    def test_small_values(self):
        assert spaces.tridiagonal_det(2) == 3
        assert spaces.tridiagonal_det(3) == -4

    def test_recurrence(self):
        for ell in range(4, 13):
            assert spaces.tridiagonal_det(ell) == -2 * spaces.tridiagonal_det(ell - 1) - spaces.tridiagonal_det(ell - 2)

    @pytest.mark.parametrize("ell", range(2, 8))
    def test_against_leibniz(self, ell):
        assert spaces.tridiagonal_det(ell) == oracles.leibniz_det(spaces.tridiagonal_matrix(ell))

    def test_rejects_small(self):
        with pytest.raises(BadParameter):
            spaces.tridiagonal_det(1)


@pytest.mark.parametrize(
    "d",
    [rectangle(3, 4), shifted_staircase(4), type_a_root(5), type_b_root(3), diagram_from_text(DIAMOND)],
    ids=["rect34", "stair4", "typeA5", "typeB3", "diamond"],
)
class TestConstraintInvariants:
    def test_orbit_average_of_non_constant_part_vanishes(self, d):
        L = lattice(d)
        for f in spaces.order_ideal_space(L).statistics():
            rest = as_vector(L, f - constant(f.constant))
            assert all(s == 0 for s in orbit_sums(L, rest))

    def test_constant_is_minus_sum_over_minimal_elements(self, d):
        p = poset(d)
        mins = [k for k in range(len(p)) if p.minimals >> k & 1]
        for dec in spaces.order_ideal_space(p).decompositions:
            assert dec.constant == -sum((dec.coefficient(k) for k in mins), Fraction(0))

    def test_diamond_ends_share_coefficient(self, d):
        p = poset(d)
        for dec in spaces.order_ideal_space(p).decompositions:
            for e1, _, _, e4 in spaces.diamonds(p):
                assert dec.coefficient(e1) == dec.coefficient(e4)


@pytest.mark.parametrize("d", [rectangle(3, 4), rectangle(4, 4), type_a_root(5)], ids=["rect34", "rect44", "typeA5"])
def test_toggle_coefficients_constant_along_diagonals(d):
    p = poset(d)
    for dec in spaces.order_ideal_space(p).decompositions:
        seen = {}
        for k, (i, j) in enumerate(p.labels):
            seen.setdefault(i - j, set()).add(dec.coefficient(k))
        assert all(len(v) == 1 for v in seen.values())


def test_verify_main_theorems_row():
    row = spaces.verify_main_theorems("rect", (3, 4))
    assert (row["predicted"], row["dim_IT"], row["dim_AT"], row["pass"]) == (6, 6, 6, True)
    row = spaces.verify_main_theorems("staircase", (4,))
    assert (row["predicted"], row["dim_IT"], row["dim_AT"], row["pass"]) == (7, 7, 7, True)
    with pytest.raises(BadParameter):
        spaces.verify_main_theorems("diagram")


def test_verify_main_theorems_diagram_in_a_box():
    d = diagram_from_text("###..\n#####\n.####\n...##")
    row = spaces.verify_main_theorems("diagram", diagram=d)
    assert row["rank"] == 7
    assert row["dim_IT"] == row["dim_AT"] == row["predicted"] == 8
    assert row["pass"]

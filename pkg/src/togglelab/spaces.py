"""The toggleability spaces and the constraints their elements satisfy.

For a poset P with lattice J(P):

* ``I_T(P) = span(1, T_p) ∩ span(IND_p)``,
* ``A_T(P) = span(1, T_p) ∩ span(AMINUS_p)``.

Both are computed as explicit intersections: stacking the two generator
matrices, every left null vector ``(x, y)`` gives the common element
``x · [1; T]``, and ``x`` is directly its toggle decomposition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg
from .diagrams import Cell, Diagram, Partition, border_strip, family_diagram, ferrers
from .errors import BadParameter, ConditionsFail, NotADiamond, UnknownFamily
from .lattice import IdealLattice, enumerate_ideals, min_of_complement
from .poset import Poset, bits, poset_from_diagram
from .statistics import (
    AMINUS,
    IND,
    Statistic,
    constant,
    integer_vector,
    linear_combination,
    tog,
)
from .statistics import ind as ind_stat

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# lattices and generator matrices


@lru_cache(maxsize=256)
def _cached_lattice(poset: Poset, cap: int | None) -> IdealLattice:
    return enumerate_ideals(poset, cap)


def lattice_for(p: Poset | IdealLattice, cap: int | None = None) -> IdealLattice:
    if isinstance(p, IdealLattice):
        return p
    return _cached_lattice(p, cap)


def generator_matrix(lattice: IdealLattice, stats: Sequence[Statistic]) -> np.ndarray:
    """Integer matrix whose rows are the statistics' vectors, each cleared of denominators."""
    rows = np.empty((len(stats), len(lattice)), dtype=object)
    for k, f in enumerate(stats):
        v, _ = integer_vector(lattice, f)
        rows[k, :] = [int(x) for x in v]
    return rows


def span_of(lattice: IdealLattice, gens: Sequence[Statistic]) -> linalg.Subspace:
    if not gens:
        return linalg.Subspace([], len(lattice))
    return linalg.Subspace(generator_matrix(lattice, gens), len(lattice))


def toggle_generators(p: Poset) -> list[Statistic]:
    return [constant()] + [tog(k) for k in range(len(p))]


def _kind_matrix(lattice: IdealLattice, kind: str) -> np.ndarray:
    table = {IND: lattice.member, AMINUS: lattice.removable}[kind]
    return table.T.astype(object)


def _toggle_matrix(lattice: IdealLattice) -> np.ndarray:
    tog_table = lattice.addable - lattice.removable
    ones = np.ones((1, len(lattice)), dtype=np.int64)
    return np.concatenate([ones, tog_table.T], axis=0).astype(object)


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class ToggleDecomposition:
    """``constant + Σ coeffs[p] · T_p`` with ``p`` an element index."""

    constant: Fraction
    coeffs: dict

    def statistic(self) -> Statistic:
        return constant(self.constant) + linear_combination((c, tog(p)) for p, c in self.coeffs.items())

    def coefficient(self, p: int) -> Fraction:
        return self.coeffs.get(p, Fraction(0))

    def by_label(self, poset: Poset) -> dict:
        return {poset.labels[p]: c for p, c in sorted(self.coeffs.items())}


def _decomposition_from(x: Sequence) -> ToggleDecomposition:
    vals = [Fraction(v) for v in x]
    return ToggleDecomposition(vals[0], {p: c for p, c in enumerate(vals[1:]) if c})


def decompose_toggle(p: Poset | IdealLattice, vector: Sequence) -> ToggleDecomposition:
    """The unique ``(c, c_p)`` with ``c + Σ c_p T_p`` equal to ``vector`` on every ideal."""
    lattice = lattice_for(p)
    if len(vector) != len(lattice):
        raise BadParameter(f"vector has length {len(vector)}, lattice has {len(lattice)} ideals")
    (x,) = linalg.solve_left(_toggle_matrix(lattice), [vector])
    return _decomposition_from(x)


# ---------------------------------------------------------------------------
# the two spaces


@dataclass(frozen=True)
class ToggleSpace:
    name: str
    lattice: IdealLattice
    dim: int
    basis: tuple
    decompositions: tuple

    def statistics(self) -> list[Statistic]:
        return [d.statistic() for d in self.decompositions]


def _sign_normalised(x: Sequence[int]) -> list[int]:
    lead = next((v for v in x if v), 1)
    return [-int(v) for v in x] if lead < 0 else [int(v) for v in x]


def _toggle_space(p: Poset | IdealLattice, kind: str, name: str, cap: int | None = None) -> ToggleSpace:
    lattice = lattice_for(p, cap)
    t = _toggle_matrix(lattice)
    b = _kind_matrix(lattice, kind)
    if linalg.rank(t) != t.shape[0]:
        # no unique toggle coordinates; still report the intersection itself
        sub = linalg.Subspace(t).intersection(linalg.Subspace(b))
        basis = tuple(tuple(Fraction(int(v)) for v in row) for row in sub.rows)
        return ToggleSpace(name, lattice, sub.dim, basis, ())
    stacked = np.concatenate([t, b], axis=0)
    null = linalg.left_nullspace(stacked)
    if linalg.check_mode():
        expected = t.shape[0] + linalg.rank(b) - linalg.rank(stacked)
        assert len(null) == expected, f"{name}: nullspace gives {len(null)}, rank formula gives {expected}"
    basis, decomps = [], []
    for v in null:
        x = _sign_normalised(v[: t.shape[0]])
        vec = np.dot(np.array(x, dtype=object), t)
        basis.append(tuple(Fraction(int(c)) for c in vec))
        decomps.append(_decomposition_from(x))
    return ToggleSpace(name, lattice, len(null), tuple(basis), tuple(decomps))


def order_ideal_space(p: Poset | IdealLattice, cap: int | None = None) -> ToggleSpace:
    return _toggle_space(p, IND, "I_T", cap)


def antichain_space(p: Poset | IdealLattice, cap: int | None = None) -> ToggleSpace:
    return _toggle_space(p, AMINUS, "A_T", cap)


def dim_IT(p: Poset | IdealLattice, cap: int | None = None) -> int:
    return order_ideal_space(p, cap).dim


def basis_IT(p: Poset | IdealLattice, cap: int | None = None) -> list[tuple]:
    return list(order_ideal_space(p, cap).basis)


def dim_AT(p: Poset | IdealLattice, cap: int | None = None) -> int:
    return antichain_space(p, cap).dim


def basis_AT(p: Poset | IdealLattice, cap: int | None = None) -> list[tuple]:
    return list(antichain_space(p, cap).basis)


def in_IT(lattice: IdealLattice, f: Statistic | Sequence) -> bool:
    vec = integer_vector(lattice, f)[0] if isinstance(f, Statistic) else f
    return span_of(lattice, toggle_generators(lattice.poset)).contains(vec) and _indicator_span(lattice).contains(vec)


def in_AT(lattice: IdealLattice, f: Statistic | Sequence) -> bool:
    vec = integer_vector(lattice, f)[0] if isinstance(f, Statistic) else f
    return span_of(lattice, toggle_generators(lattice.poset)).contains(vec) and _antichain_span(lattice).contains(vec)


def _indicator_span(lattice: IdealLattice) -> linalg.Subspace:
    return linalg.Subspace(_kind_matrix(lattice, IND), len(lattice))


def _antichain_span(lattice: IdealLattice) -> linalg.Subspace:
    return linalg.Subspace(_kind_matrix(lattice, AMINUS), len(lattice))


def statistics_rank(lattice: IdealLattice, stats: Sequence[Statistic]) -> int:
    return linalg.rank(generator_matrix(lattice, stats)) if stats else 0


# ---------------------------------------------------------------------------
# diamond condition


@dataclass(frozen=True)
class DiamondCheck:
    hypotheses_hold: bool
    conditions: dict
    primed_hold: bool
    primed_conditions: dict
    witness_sets: dict

    @property
    def agree(self) -> bool:
        return self.hypotheses_hold == self.primed_hold


def _is_subset(a: int, b: int) -> bool:
    return not (a & ~b)


def check_diamond(p: Poset, p1, p2, p3, p4) -> DiamondCheck:
    """Evaluate the three set conditions under which ``c_{p1} = c_{p4}`` is forced,
    together with the four-part disjoint-union form they are claimed to be equivalent to."""
    e1, e2, e3, e4 = (p.element(x) for x in (p1, p2, p3, p4))
    covers = p.covers
    if e2 == e3 or not {(e1, e2), (e2, e4), (e1, e3), (e3, e4)} <= covers:
        raise NotADiamond("need p1 ⋖ p2 ⋖ p4 and p1 ⋖ p3 ⋖ p4 with p2 ≠ p3")
    s1 = min_of_complement(p, p.down_set(e1))
    s2 = min_of_complement(p, p.down_set(e2))
    s3 = min_of_complement(p, p.down_set(e3))
    s23 = min_of_complement(p, p.down_set(e2) | p.down_set(e3))
    s2_1 = s2 & ~s1
    s3_1 = s3 & ~s1
    b4 = 1 << e4
    cond = {
        "a": _is_subset(s2_1, s23) and _is_subset(s3_1, s23) and _is_subset(b4, s23),
        "b": _is_subset(s1, s2 | s3) and _is_subset(s23 & ~b4, s2 | s3),
        "c": (s23 & s1) == (s2 & s3),
    }
    rest23 = s23 & ~(s2_1 | s3_1 | b4)
    r2 = (s2 & s1) & ~s23
    r3 = (s3 & s1) & ~s23
    pieces = [s2_1, s3_1, rest23, r2, r3, b4]
    disjoint = all(not (pieces[i] & pieces[j]) for i in range(len(pieces)) for j in range(i + 1, len(pieces)))
    primed = {
        "a'": (s2_1 | s3_1 | rest23 | b4) == s23,
        "b'": (r2 | r3 | rest23) == s1,
        "c'": (s2_1 | rest23 | r2) == s2 and (s3_1 | rest23 | r3) == s3,
        "d'": disjoint,
    }
    sets = {
        "S1": s1,
        "S2": s2,
        "S3": s3,
        "S23": s23,
        "S2_1": s2_1,
        "S3_1": s3_1,
        "S23_rest": rest23,
        "S2_cap_S1_minus_S23": r2,
        "S3_cap_S1_minus_S23": r3,
    }
    witness = {name: frozenset(p.label_set(mask)) for name, mask in sets.items()}
    result = DiamondCheck(all(cond.values()), cond, all(primed.values()), primed, witness)
    if not result.agree:
        log.warning("diamond conditions disagree with their disjoint-union form at %s", (p1, p2, p3, p4))
    return result


def diamonds(p: Poset) -> list[tuple[int, int, int, int]]:
    """Every ``(p1, p2, p3, p4)`` with ``p1 ⋖ p2, p3 ⋖ p4`` and ``p2 < p3`` by index."""
    out = []
    for e1 in range(len(p)):
        ups = bits(p.upper_covers[e1])
        for i, e2 in enumerate(ups):
            for e3 in ups[i + 1 :]:
                for e4 in bits(p.upper_covers[e2] & p.upper_covers[e3]):
                    out.append((e1, e2, e3, e4))
    return out


# ---------------------------------------------------------------------------
# root-zero condition


def check_root_zero(p: Poset, pp, q1, q2) -> bool:
    """Disjoint down-sets below ``q1`` and ``q2``, and ``pp`` their only common upper cover."""
    e, a, b = (p.element(x) for x in (pp, q1, q2))
    if p.down_set(a) & p.down_set(b):
        return False
    return p.upper_covers[a] & p.upper_covers[b] == 1 << e


def root_zero_cells(family: str, n: int) -> list[Cell]:
    """Cells whose toggle coefficient must vanish in a root poset."""
    total = {"typeA": n + 2, "typeB": 2 * n + 1}.get(family)
    if total is None:
        raise UnknownFamily(f"no root-zero cells recorded for family {family!r}")
    d = family_diagram(family, (n,))
    return [c for c in d if c.row + c.col == total]


# ---------------------------------------------------------------------------
# diagonal statistics


def _diagram_of(p: Poset) -> Diagram:
    if not all(isinstance(lab, tuple) and len(lab) == 2 for lab in p.labels):
        raise BadParameter("this operation needs a poset built from a diagram")
    return Diagram(p.labels)


def diagonal(d: Diagram, k: int) -> list[Cell]:
    return [c for c in d if c.row - c.col == k]


@dataclass(frozen=True)
class DiagonalConditions:
    k: int
    failed: tuple
    notes: tuple

    @property
    def ok(self) -> bool:
        return not self.failed


def diagonal_conditions(p: Poset, k: int) -> DiagonalConditions:
    from .diagrams import is_column_convex, is_connected, is_row_convex

    d = _diagram_of(p)
    failed, notes = [], []
    if not is_connected(d):
        failed.append("diagram is not connected")
    if not (is_row_convex(d) and is_column_convex(d)):
        failed.append("diagram is not row and column convex")
    if not (diagonal(d, k) and diagonal(d, k - 1) and diagonal(d, k + 1)):
        failed.append("(i): diagonals k, k-1, k+1 must all be nonempty")
    r0, r1, c0, c1 = d.bounds
    cells = d.cells
    bad = []
    for i in range(r0 - 1, r1 + 1):
        j = i - k
        if not (c0 - 1 <= j <= c1):
            continue
        lhs = (i, j) in cells and (i + 1, j + 1) in cells
        rhs = (i, j + 1) in cells and (i + 1, j) in cells
        if lhs != rhs:
            bad.append((i, j))
    if bad:
        failed.append(f"(ii): square condition fails at {bad}")
    if len(diagonal(d, k)) <= 1:
        notes.append("(ii) holds vacuously on its left side: diagonal has at most one cell")
        log.info("diagonal %d: square condition is vacuous on its left side", k)
    return DiagonalConditions(k, tuple(failed), tuple(notes))


def diagonal_statistic(p: Poset, k: int) -> Statistic:
    """Sum of the toggles along diagonal ``i - j = k``, less 1 if the diagonal holds a minimal element."""
    cond = diagonal_conditions(p, k)
    if not cond.ok:
        raise ConditionsFail(f"diagonal {k}: " + "; ".join(cond.failed), cond.failed)
    d = _diagram_of(p)
    cells = [p.element(c) for c in diagonal(d, k)]
    f = linear_combination((1, tog(e)) for e in cells)
    if any(p.minimals >> e & 1 for e in cells):
        f = f - constant()
    return f


def diagonal_indicator_form(p: Poset, k: int) -> Statistic:
    """``-2 Σ_{diagonal k} IND + Σ IND`` over neighbouring-diagonal cells cover-related to it."""
    d = _diagram_of(p)
    on = {p.element(c) for c in diagonal(d, k)}
    near = {p.element(c) for c in diagonal(d, k - 1) + diagonal(d, k + 1)}
    related = {q for q in near if any((q, e) in p.covers or (e, q) in p.covers for e in on)}
    return linear_combination([(-2, ind_stat(e)) for e in sorted(on)] + [(1, ind_stat(q)) for q in sorted(related)])


# ---------------------------------------------------------------------------
# the explicit bases


_FAMILY_ALIASES = {
    "rect": "rect",
    "rectangle": "rect",
    "staircase": "staircase",
    "shifted_staircase": "staircase",
    "typeA": "typeA",
    "type_a_root": "typeA",
    "typeB": "typeB",
    "type_b_root": "typeB",
}


def canonical_family(family: str) -> str:
    try:
        return _FAMILY_ALIASES[family]
    except KeyError:
        raise UnknownFamily(f"unknown family {family!r}") from None


class _Builder:
    def __init__(self, d: Diagram):
        self.d = d
        self.poset = poset_from_diagram(d)

    def e(self, i: int, j: int) -> int:
        return self.poset.index[Cell(i, j)]

    def diag(self, k: int) -> list[int]:
        return [self.poset.index[c] for c in diagonal(self.d, k)]

    def tog_sum(self, k: int) -> Statistic:
        return linear_combination((1, tog(e)) for e in self.diag(k))

    def ind_sum(self, k: int, coef=1) -> Statistic:
        return linear_combination((coef, ind_stat(e)) for e in self.diag(k))

    def ind_cells(self, pairs) -> Statistic:
        return linear_combination((c, ind_stat(self.e(i, j))) for c, (i, j) in pairs)


def _family_builder(family: str, params: tuple[int, ...]) -> tuple[str, _Builder]:
    family = canonical_family(family)
    return family, _Builder(family_diagram(family, tuple(params)))


def basis_B1(family: str, params: tuple[int, ...]) -> list[Statistic]:
    """The toggle-form basis of I_T for a named family."""
    family, b = _family_builder(family, params)
    one = constant()
    if family == "rect":
        m, n = params
        return [b.tog_sum(k) - one if k == 0 else b.tog_sum(k) for k in range(1 - n, m)]
    if family == "staircase":
        (n,) = params
        out = [b.tog_sum(k) for k in range(1 - n, 0)]
        out += [tog(b.e(k, k)) for k in range(2, n + 1)]
        return out + [tog(b.e(1, 1)) - one]
    if family == "typeA":
        (n,) = params
        return [b.tog_sum(2 * k + 1 - n) - one for k in range(n)]
    (n,) = params
    out = [b.tog_sum(2 * k) - one for k in range(1, n)]
    out.append(tog(b.e(n, n)) - one)
    return out + [tog(b.e(i, i)) for i in range(n + 1, 2 * n)]


def basis_B2(family: str, params: tuple[int, ...]) -> list[Statistic]:
    """The indicator-form basis of I_T for a named family."""
    family, b = _family_builder(family, params)
    if family == "rect":
        m, n = params
        return [b.ind_sum(k) for k in range(1 - n, m)]
    if family == "staircase":
        (n,) = params
        out = [b.ind_sum(k) for k in range(1 - n, 0)]
        out += [b.ind_cells([(2, (i, i)), (-1, (i - 1, i)), (-1, (i, i + 1))]) for i in range(2, n)]
        out.append(b.ind_cells([(2, (1, 1)), (-1, (1, 2))]))
        out.append(b.ind_cells([(2, (n, n)), (-1, (n - 1, n))]))
        return out
    if family == "typeA":
        (n,) = params
        return [
            b.ind_sum(2 * k + 1 - n, 2) - b.ind_sum(2 * k + 2 - n) - b.ind_sum(2 * k - n)
            for k in range(n)
        ]
    (n,) = params
    out = [b.ind_sum(2 * k, 2) - b.ind_sum(2 * k - 1) - b.ind_sum(2 * k + 1) for k in range(1, n)]
    out += [b.ind_cells([(2, (k, k)), (-1, (k, k - 1)), (-1, (k + 1, k))]) for k in range(n + 1, 2 * n - 1)]
    out.append(b.ind_cells([(2, (2 * n - 1, 2 * n - 1)), (-1, (2 * n - 1, 2 * n - 2))]))
    out.append(b.ind_cells([(2, (n, n)), (-1, (n + 1, n))]))
    return out


@dataclass(frozen=True)
class BasisCheck:
    family: str
    params: tuple
    which: str
    size: int
    dim_IT: int
    in_IT: bool
    independent: bool

    @property
    def passed(self) -> bool:
        return self.in_IT and self.independent and self.size == self.dim_IT


def check_basis(family: str, params: tuple[int, ...], which: str) -> BasisCheck:
    build = {"B1": basis_B1, "B2": basis_B2}.get(which)
    if build is None:
        raise BadParameter(f"basis must be B1 or B2, got {which!r}")
    family = canonical_family(family)
    stats = build(family, tuple(params))
    poset = poset_from_diagram(family_diagram(family, tuple(params)))
    lattice = lattice_for(poset)
    space = order_ideal_space(lattice)
    target = linalg.Subspace(space.basis, len(lattice)) if space.dim else linalg.Subspace([], len(lattice))
    members = all(target.contains(integer_vector(lattice, f)[0]) for f in stats)
    independent = statistics_rank(lattice, stats) == len(stats)
    return BasisCheck(family, tuple(params), which, len(stats), space.dim, members, independent)


def tridiagonal_matrix(ell: int) -> list[list[int]]:
    return [[-2 if r == c else 1 if abs(r - c) == 1 else 0 for c in range(ell)] for r in range(ell)]


def tridiagonal_det(ell: int) -> int:
    """Determinant of the ``ell × ell`` matrix with -2 on the diagonal and 1 beside it."""
    if not isinstance(ell, int) or ell < 2:
        raise BadParameter(f"need ell >= 2, got {ell!r}")
    return int(linalg.det(tridiagonal_matrix(ell)))


# ---------------------------------------------------------------------------
# partitions and the dimension report


@dataclass(frozen=True)
class PartitionDims:
    partition: Partition
    N: int
    C: int
    dim_formula: int
    dim_IT: int
    dim_AT: int

    @property
    def match(self) -> bool:
        return self.dim_IT == self.dim_AT == self.dim_formula


def partition_dims(lam: Partition, cap: int | None = None) -> PartitionDims:
    strip = border_strip(lam)
    poset = poset_from_diagram(ferrers(lam))
    lattice = lattice_for(poset, cap)
    return PartitionDims(lam, strip.N, strip.C, strip.N - strip.C, dim_IT(lattice), dim_AT(lattice))


def predicted_dimension(family: str, params: tuple) -> int | None:
    if family == "rect":
        m, n = params
        return m + n - 1
    if family in ("staircase", "typeB"):
        return 2 * params[0] - 1
    if family == "typeA":
        return params[0]
    if family == "partition":
        strip = border_strip(Partition(params))
        return strip.N - strip.C
    return None


def verify_main_theorems(
    family: str,
    params: tuple = (),
    diagram: Diagram | None = None,
    cap: int | None = None,
) -> dict:
    """One verification row: computed dimensions against the predicted value.

    ``family`` is a named family, ``"partition"`` (``params`` are the parts) or
    ``"diagram"`` (pass ``diagram``; predicted as rank + 1 exactly when it is
    simply connected with no outward corners).
    """
    from .diagrams import predicates

    if family == "diagram":
        if diagram is None:
            raise BadParameter("family 'diagram' needs a diagram")
        d = diagram
    elif family == "partition":
        d = ferrers(Partition(params))
    else:
        family = canonical_family(family)
        d = family_diagram(family, tuple(params))
    poset = poset_from_diagram(d)
    lattice = lattice_for(poset, cap)
    it, at = dim_IT(lattice), dim_AT(lattice)
    if family == "diagram":
        preds = predicates(d)
        predicted = poset.rank + 1 if preds.simply_connected and preds.no_outward_corners else None
    else:
        predicted = predicted_dimension(family, tuple(params))
    passed = predicted is None or it == at == predicted
    return {
        "family": family,
        "params": list(params) if family != "diagram" else [[c.row, c.col] for c in d],
        "num_elements": len(poset),
        "num_ideals": len(lattice),
        "rank": poset.rank,
        "dim_IT": it,
        "dim_AT": at,
        "predicted": predicted,
        "pass": passed,
    }


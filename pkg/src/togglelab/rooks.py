"""Rook statistics on diagrams with no outward corners.

For a cell ``(i, j)`` the rook adds ``APLUS`` over the closed north-west
quadrant and ``AMINUS`` over the closed south-east quadrant, then removes
``AMINUS`` at strictly north-west cells whose south and east neighbours are
present, and ``APLUS`` at strictly south-east cells whose north and west
neighbours are present.  On every order ideal it equals 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .diagrams import Cell, Diagram, predicates
from .errors import BadDiagram, CellNotInDiagram, PredicateFail
from .lattice import IdealLattice
from .poset import Poset, poset_from_diagram
from .statistics import AMINUS, APLUS, IND, TOG, Generator, Statistic, integer_vector
from .spaces import lattice_for


def _require_cell(d: Diagram, cell) -> Cell:
    cell = Cell(*cell)
    if cell not in d:
        raise CellNotInDiagram(f"cell {cell} is not in the diagram")
    return cell


def _require_rook_shape(d: Diagram) -> None:
    preds = predicates(d)
    if not preds.connected:
        raise BadDiagram("rook statistics need a connected diagram")
    if not preds.simply_connected:
        raise BadDiagram("rook statistics need a simply connected diagram")
    if not preds.no_outward_corners:
        flagged = sorted(preds.cells_with_outward_corners)
        raise BadDiagram(f"rook statistics need a diagram with no outward corners; offending cells {flagged}")


def rook_terms(d: Diagram, cell) -> list[tuple[str, Cell, int]]:
    """The four sums as ``(kind, cell, sign)`` triples, before any cancellation."""
    i, j = cell
    cells = d.cells
    out = []
    for c in sorted(cells):
        a, b = c
        if a <= i and b <= j:
            out.append((APLUS, c, 1))
        if a >= i and b >= j:
            out.append((AMINUS, c, 1))
        if a < i and b < j and (a + 1, b) in cells and (a, b + 1) in cells:
            out.append((AMINUS, c, -1))
        if a > i and b > j and (a - 1, b) in cells and (a, b - 1) in cells:
            out.append((APLUS, c, -1))
    return out


def rook(d: Diagram, cell, poset: Poset | None = None) -> Statistic:
    _require_rook_shape(d)
    cell = _require_cell(d, cell)
    poset = poset or poset_from_diagram(d)
    return Statistic((Generator(kind, poset.index[c]), sign) for kind, c, sign in rook_terms(d, cell))


def reduce_to_antichains(f: Statistic) -> Statistic:
    """Rewrite each ``APLUS(q)`` as ``TOG(q) + AMINUS(q)`` and drop the toggles."""
    terms = []
    for g, c in f:
        if g.kind == APLUS:
            terms.append((Generator(AMINUS, g.element), c))
        elif g.kind == TOG:
            continue
        else:
            terms.append((g, c))
    return Statistic(terms)


def reduced_rook(d: Diagram, cell, poset: Poset | None = None) -> Statistic:
    return reduce_to_antichains(rook(d, cell, poset))


def support_by_cell(poset: Poset, f: Statistic) -> dict:
    """``{kind: {cell: coefficient}}`` for the non-constant terms of ``f``."""
    out: dict = {}
    for g, c in f:
        if g.element is not None:
            out.setdefault(g.kind, {})[poset.labels[g.element]] = c
    return out


def rook_identity_holds(d: Diagram, cell, lattice: IdealLattice | None = None) -> bool:
    poset = lattice.poset if lattice is not None else poset_from_diagram(d)
    lattice = lattice or lattice_for(poset)
    v, den = integer_vector(lattice, rook(d, cell, poset))
    return all(int(x) == den for x in v)


@dataclass(frozen=True)
class HalfRook:
    holds: bool
    expansion: dict
    diagonal_coefficient: Fraction


def half_rook_identity(d: Diagram, cell, lattice: IdealLattice | None = None) -> HalfRook:
    """Check ``IND(i,j) = Σ_{SE quadrant} AMINUS − Σ_{S1} APLUS`` on every ideal.

    ``S1`` holds the strictly south-east cells whose north and west neighbours
    are in the diagram.  ``expansion`` is the antichain form modulo toggles:
    coefficient 1 on the south-east quadrant outside ``S1``.
    """
    preds = predicates(d)
    cell = _require_cell(d, cell)
    if not preds.simply_connected:
        raise PredicateFail("half-rook identity needs a simply connected diagram")
    if not preds.no_se_outward_corners(cell):
        raise PredicateFail(f"cell {cell} has an outward corner to its south-east")
    poset = lattice.poset if lattice is not None else poset_from_diagram(d)
    lattice = lattice or lattice_for(poset)
    i, j = cell
    cells = d.cells
    quadrant = [c for c in sorted(cells) if c.row >= i and c.col >= j]
    s1 = [c for c in quadrant if c.row > i and c.col > j and (c.row - 1, c.col) in cells and (c.row, c.col - 1) in cells]
    g = Statistic(
        [(Generator(AMINUS, poset.index[c]), 1) for c in quadrant]
        + [(Generator(APLUS, poset.index[c]), -1) for c in s1]
    )
    lhs = Statistic({Generator(IND, poset.index[cell]): 1})
    holds = list(integer_vector(lattice, g)[0]) == list(integer_vector(lattice, lhs)[0])
    expansion = {c: Fraction(1) for c in quadrant if c not in set(s1)}
    return HalfRook(holds, expansion, expansion.get(cell, Fraction(0)))


@dataclass(frozen=True)
class SEChain:
    chain: list
    rooks: list
    independent: bool
    count: int
    rank: int

    @property
    def passed(self) -> bool:
        return self.independent and self.count == self.rank + 1


def se_chain(d: Diagram) -> list[Cell]:
    """Walk from the north-west cell, going south when possible and east otherwise."""
    r0, _, c0, _ = d.bounds
    start = Cell(r0, c0)
    if start not in d:
        raise PredicateFail(f"no cell at the north-west corner {start} of the bounding box")
    chain = [start]
    i, j = start
    while True:
        if (i + 1, j) in d.cells:
            i += 1
        elif (i, j + 1) in d.cells:
            j += 1
        else:
            break
        chain.append(Cell(i, j))
    return chain


def se_chain_rooks(d: Diagram, lattice: IdealLattice | None = None) -> SEChain:
    _require_rook_shape(d)
    poset = lattice.poset if lattice is not None else poset_from_diagram(d)
    lattice = lattice or lattice_for(poset)
    chain = se_chain(d)
    idx = [poset.index[c] for c in chain]
    if not (poset.minimals >> idx[0] & 1 and poset.maximals >> idx[-1] & 1) or len(chain) != poset.rank + 1:
        raise PredicateFail(f"south-then-east walk {chain} is not a maximal chain of length rank + 1")
    rooks = [reduced_rook(d, c, poset) for c in chain]
    rows = [list(integer_vector(lattice, f)[0]) for f in rooks]
    independent = linalg.rank(rows) == len(rooks)
    return SEChain(chain, rooks, independent, len(rooks), poset.rank)

"""Diagrams of unit cells in matrix coordinates, the named families, partitions,
and the geometric predicates that the rook machinery depends on.

Rows grow southward and columns eastward, both starting at 1.  A *grid point*
``(r, c)`` is the lattice corner shared by cells ``(r, c)``, ``(r, c+1)``,
``(r+1, c)`` and ``(r+1, c+1)``; so the point ``(r, c)`` is the south-east
corner of cell ``(r, c)`` and the north-west corner of cell ``(r+1, c+1)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, NamedTuple

from .errors import BadCharacter, BadParameter, EmptyDiagram, UnknownFamily


class Cell(NamedTuple):
    row: int
    col: int

    def __str__(self) -> str:
        return f"{self.row},{self.col}"


def parse_cell(text: str) -> Cell:
    """Parse ``"i,j"`` into a :class:`Cell`."""
    try:
        i, j = (int(part) for part in text.split(","))
    except ValueError as exc:
        raise BadParameter(f"cell must look like 'i,j', got {text!r}") from exc
    if i < 1 or j < 1:
        raise BadParameter(f"cell coordinates are 1-based, got {text!r}")
    return Cell(i, j)


@dataclass(frozen=True)
class Diagram:
    cells: frozenset

    def __init__(self, cells: Iterable[tuple[int, int]]):
        cells = frozenset(Cell(int(i), int(j)) for i, j in cells)
        if not cells:
            raise EmptyDiagram("a diagram needs at least one cell")
        bad = [c for c in cells if c.row < 1 or c.col < 1]
        if bad:
            raise BadParameter(f"cells must have positive coordinates: {sorted(bad)}")
        object.__setattr__(self, "cells", cells)

    def __contains__(self, cell) -> bool:
        return cell in self.cells

    def __iter__(self) -> Iterator[Cell]:
        return iter(sorted(self.cells))

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def bounds(self) -> tuple[int, int, int, int]:
        """``(min_row, max_row, min_col, max_col)``."""
        rows = [c.row for c in self.cells]
        cols = [c.col for c in self.cells]
        return min(rows), max(rows), min(cols), max(cols)

    def to_text(self) -> str:
        _, r1, _, c1 = self.bounds
        lines = []
        for i in range(1, r1 + 1):
            line = "".join("#" if (i, j) in self.cells else "." for j in range(1, c1 + 1))
            lines.append(line.rstrip(".") or ".")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"cells": [[c.row, c.col] for c in self]}


def diagram_from_text(text: str) -> Diagram:
    """Read a diagram drawn with ``#`` for cells and ``.`` for holes.

    Line ``i`` is row ``i``; short lines are treated as padded with ``.``.
    """
    cells = []
    for i, line in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        for j, ch in enumerate(line, start=1):
            if ch == "#":
                cells.append((i, j))
            elif ch != ".":
                raise BadCharacter(f"unexpected character {ch!r} at line {i}, column {j}")
    if not cells:
        raise EmptyDiagram("diagram text contains no '#'")
    return Diagram(cells)


def diagram_from_json(data: dict | str) -> Diagram:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        cells = [(int(i), int(j)) for i, j in data["cells"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadParameter('diagram JSON must look like {"cells": [[i, j], ...]}') from exc
    if len(set(cells)) != len(cells):
        raise BadParameter("duplicate cells in diagram JSON")
    return Diagram(cells)


def load_diagram(path) -> Diagram:
    """Load a diagram file; JSON if it parses as such, otherwise the text form."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return diagram_from_json(text)
    return diagram_from_text(text.rstrip("\n"))


# ---------------------------------------------------------------------------
# named families


def _positive(**params: int) -> None:
    for name, value in params.items():
        if not isinstance(value, int) or value < 1:
            raise BadParameter(f"{name} must be a positive integer, got {value!r}")


def rectangle(m: int, n: int) -> Diagram:
    _positive(m=m, n=n)
    return Diagram(product(range(1, m + 1), range(1, n + 1)))


def shifted_staircase(n: int) -> Diagram:
    _positive(n=n)
    return Diagram((i, j) for i in range(1, n + 1) for j in range(i, n + 1))


def type_a_root(n: int) -> Diagram:
    if not isinstance(n, int) or n < 2:
        raise BadParameter(f"type A root posets need n >= 2, got {n!r}")
    return Diagram((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i + j >= n + 1)


def type_b_root(n: int) -> Diagram:
    # read off the labelled picture of the B_3 case: rows n..2n-1, row i spans 2n-i..i
    if not isinstance(n, int) or n < 2:
        raise BadParameter(f"type B root posets need n >= 2, got {n!r}")
    return Diagram((i, j) for i in range(n, 2 * n) for j in range(2 * n - i, i + 1))


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(parts)
        if not parts:
            raise BadParameter("a partition needs at least one part")
        if any(not isinstance(p, int) or p < 1 for p in parts):
            raise BadParameter(f"partition parts must be positive integers: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise BadParameter(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> Partition:
        try:
            return cls(int(x) for x in text.split(",") if x.strip())
        except ValueError as exc:
            raise BadParameter(f"partition must look like '5,2,1,1', got {text!r}") from exc

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


def partitions(total: int, largest: int | None = None) -> Iterator[Partition]:
    """All partitions of ``total`` in reverse lexicographic order."""
    largest = total if largest is None else largest

    def gen(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    for parts in gen(total, largest):
        yield Partition(parts)


def ferrers(lam: Partition) -> Diagram:
    return Diagram((i, j) for i, part in enumerate(lam.parts, start=1) for j in range(1, part + 1))


FAMILIES = {
    "rect": (rectangle, 2),
    "staircase": (shifted_staircase, 1),
    "typeA": (type_a_root, 1),
    "typeB": (type_b_root, 1),
}


def family_diagram(family: str, params: tuple[int, ...]) -> Diagram:
    try:
        build, arity = FAMILIES[family]
    except KeyError:
        raise UnknownFamily(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    if len(params) != arity:
        raise BadParameter(f"family {family!r} takes {arity} parameter(s), got {params}")
    return build(*params)


# ---------------------------------------------------------------------------
# predicates


def is_connected(d: Diagram) -> bool:
    start = next(iter(d.cells))
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
            if nb in d.cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(d.cells)


def _lines_convex(groups: dict[int, list[int]]) -> bool:
    return all(max(v) - min(v) + 1 == len(v) for v in groups.values())


def is_row_convex(d: Diagram) -> bool:
    rows: dict[int, list[int]] = {}
    for c in d.cells:
        rows.setdefault(c.row, []).append(c.col)
    return _lines_convex(rows)


def is_column_convex(d: Diagram) -> bool:
    cols: dict[int, list[int]] = {}
    for c in d.cells:
        cols.setdefault(c.col, []).append(c.row)
    return _lines_convex(cols)


def is_simply_connected(d: Diagram) -> bool:
    """No missing cell whose four orthogonal neighbours are all present."""
    r0, r1, c0, c1 = d.bounds
    for i in range(r0 + 1, r1):
        for j in range(c0 + 1, c1):
            if (i, j) in d.cells:
                continue
            if all(nb in d.cells for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1))):
                return False
    return True


@dataclass(frozen=True)
class BoundaryCorners:
    """Boundary corners split by shape.

    ``en`` holds the points where the boundary has the shape of a west step
    meeting a north step (the north-west quadrant differs from the other
    three); ``ne`` holds the points shaped like a south step meeting an east
    step (the south-east quadrant differs).  Both convex and reflex corners
    are included.
    """

    en: frozenset
    ne: frozenset


def boundary_corners(d: Diagram) -> BoundaryCorners:
    r0, r1, c0, c1 = d.bounds
    cells = d.cells
    en, ne = set(), set()
    for r in range(r0 - 1, r1 + 1):
        for c in range(c0 - 1, c1 + 1):
            nw = (r, c) in cells
            nE = (r, c + 1) in cells
            sw = (r + 1, c) in cells
            se = (r + 1, c + 1) in cells
            if nE == sw == se != nw:
                en.add((r, c))
            if nw == nE == sw != se:
                ne.add((r, c))
    return BoundaryCorners(frozenset(en), frozenset(ne))


def outward_corners(d: Diagram, cell: tuple[int, int], corners: BoundaryCorners | None = None):
    """Outward corners associated to ``cell``: ``(nw_points, se_points)``.

    A west/north corner counts when it sits at or beyond the cell's north-west
    corner, a south/east corner when it sits at or beyond its south-east corner.
    """
    corners = corners or boundary_corners(d)
    i, j = cell
    nw = sorted(p for p in corners.en if p[0] <= i - 1 and p[1] <= j - 1)
    se = sorted(p for p in corners.ne if p[0] >= i and p[1] >= j)
    return nw, se


@dataclass(frozen=True)
class DiagramPredicates:
    connected: bool
    row_convex: bool
    column_convex: bool
    simply_connected: bool
    no_outward_corners: bool
    cells_with_outward_corners: frozenset = field(default=frozenset())
    cells_with_se_outward_corners: frozenset = field(default=frozenset())

    def no_se_outward_corners(self, cell) -> bool:
        return Cell(*cell) not in self.cells_with_se_outward_corners

    def as_dict(self) -> dict:
        return {
            "connected": self.connected,
            "row_convex": self.row_convex,
            "column_convex": self.column_convex,
            "simply_connected": self.simply_connected,
            "no_outward_corners": self.no_outward_corners,
            "cells_with_outward_corners": [list(c) for c in sorted(self.cells_with_outward_corners)],
        }


def predicates(d: Diagram) -> DiagramPredicates:
    corners = boundary_corners(d)
    flagged, se_flagged = set(), set()
    for cell in d.cells:
        nw, se = outward_corners(d, cell, corners)
        if nw or se:
            flagged.add(cell)
        if se:
            se_flagged.add(cell)
    return DiagramPredicates(
        connected=is_connected(d),
        row_convex=is_row_convex(d),
        column_convex=is_column_convex(d),
        simply_connected=is_simply_connected(d),
        no_outward_corners=not flagged,
        cells_with_outward_corners=frozenset(flagged),
        cells_with_se_outward_corners=frozenset(se_flagged),
    )


def has_no_outward_corners(d: Diagram) -> bool:
    return predicates(d).no_outward_corners


# ---------------------------------------------------------------------------
# border strips


class BorderStrip(NamedTuple):
    cells: frozenset
    corners: frozenset
    N: int
    C: int


def border_strip(lam: Partition) -> BorderStrip:
    shape = ferrers(lam).cells
    strip = frozenset(c for c in shape if (c.row + 1, c.col + 1) not in shape)
    corners = frozenset(
        c for c in strip if (c.row + 1, c.col) in strip and (c.row, c.col + 1) in strip
    )
    return BorderStrip(strip, corners, len(strip), len(corners))


def diagonal_bijection_check(lam: Partition) -> bool:
    """Is ``(i, j) -> i - j`` a bijection from the border strip onto the diagonals of F(lam)?"""
    strip = border_strip(lam).cells
    image = [c.row - c.col for c in strip]
    diagonals = {c.row - c.col for c in ferrers(lam).cells}
    return len(set(image)) == len(image) and set(image) == diagonals


# ---------------------------------------------------------------------------
# random diagrams with no outward corners


def _random_path(rng: random.Random, m: int, n: int) -> list[tuple[int, int]]:
    steps = ["S"] * m + ["E"] * n
    rng.shuffle(steps)
    r = c = 0
    points = [(0, 0)]
    for s in steps:
        if s == "S":
            r += 1
        else:
            c += 1
        points.append((r, c))
    return points


def _south_step_columns(points: list[tuple[int, int]], m: int) -> list[int]:
    cols = [0] * (m + 1)
    for (r, c), (r2, _) in zip(points, points[1:]):
        if r2 == r + 1:
            cols[r2] = c
    return cols[1:]


def random_outward_free_diagram(
    rng: random.Random, max_cells: int = 20, max_rows: int = 5, max_cols: int = 6
) -> Diagram:
    """Rejection-sample a diagram bounded by two south/east lattice paths that
    share only their endpoints, keeping only samples with no outward corners."""
    while True:
        m = rng.randint(1, max_rows)
        n = rng.randint(1, max_cols)
        p, q = _random_path(rng, m, n), _random_path(rng, m, n)
        if set(p[1:-1]) & set(q[1:-1]) or p[1] == q[1]:
            continue
        upper, lower = (p, q) if p[1] == (0, 1) else (q, p)
        right = _south_step_columns(upper, m)
        left = _south_step_columns(lower, m)
        cells = [(r, c) for r in range(1, m + 1) for c in range(left[r - 1] + 1, right[r - 1] + 1)]
        if not cells or len(cells) > max_cells:
            continue
        d = Diagram(cells)
        preds = predicates(d)
        if preds.simply_connected and preds.no_outward_corners:
            return d

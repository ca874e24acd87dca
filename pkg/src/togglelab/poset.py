"""Finite posets stored as cover relations over integer-indexed elements.

Subsets of a poset are Python ints used as bitsets: bit ``k`` stands for
element ``k``.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .diagrams import Cell, Diagram
from .errors import BadParameter, CellNotInDiagram


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Poset:
    """A finite poset given by its labels and cover pairs ``(a, b)`` meaning a ⋖ b."""

    def __init__(self, labels: Sequence[Hashable], covers: Iterable[tuple[int, int]]):
        self.labels = tuple(labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise BadParameter("poset labels must be distinct")
        self.index = {lab: k for k, lab in enumerate(self.labels)}
        self.covers = frozenset((int(a), int(b)) for a, b in covers)
        lower = [0] * n
        upper = [0] * n
        for a, b in self.covers:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise BadParameter(f"bad cover pair ({a}, {b})")
            lower[b] |= 1 << a
            upper[a] |= 1 << b
        self.lower_covers = tuple(lower)
        self.upper_covers = tuple(upper)
        self.linear_extension = self._topological_order()
        below = [0] * n
        for k in self.linear_extension:
            m = 0
            for a in bits(lower[k]):
                m |= below[a] | (1 << a)
            below[k] = m
        self.strictly_below = tuple(below)
        above = [0] * n
        for k in reversed(self.linear_extension):
            m = 0
            for b in bits(upper[k]):
                m |= above[b] | (1 << b)
            above[k] = m
        self.strictly_above = tuple(above)
        for a, b in self.covers:
            if self.strictly_above[a] & self.strictly_below[b]:
                raise BadParameter(f"cover ({a}, {b}) is implied by transitivity")

    def _topological_order(self) -> tuple[int, ...]:
        n = len(self.labels)
        indeg = [bin(m).count("1") for m in self.lower_covers]
        ready = [k for k in range(n) if indeg[k] == 0]
        order = []
        while ready:
            ready.sort(reverse=True)
            k = ready.pop()
            order.append(k)
            for b in bits(self.upper_covers[k]):
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        if len(order) != n:
            raise BadParameter("cover relation contains a cycle")
        return tuple(order)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self.labels == other.labels and self.covers == other.covers

    def __hash__(self) -> int:
        return hash((self.labels, self.covers))

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def element(self, label) -> int:
        """Index of an element given its label (a :class:`Cell` or a raw index)."""
        if label in self.index:
            return self.index[label]
        if isinstance(label, int) and not isinstance(label, bool) and 0 <= label < len(self):
            return label
        raise CellNotInDiagram(f"{label!r} is not an element of this poset")

    def leq(self, a: int, b: int) -> bool:
        return a == b or bool(self.strictly_below[b] >> a & 1)

    def comparable(self, a: int, b: int) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def down_set(self, a: int) -> int:
        return self.strictly_below[a] | (1 << a)

    def up_set(self, a: int) -> int:
        return self.strictly_above[a] | (1 << a)

    def label_set(self, mask: int) -> list:
        return [self.labels[k] for k in bits(mask)]

    def mask_of(self, labels: Iterable) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.element(lab)
        return m

    @cached_property
    def minimals(self) -> int:
        return sum(1 << k for k in range(len(self)) if not self.lower_covers[k])

    @cached_property
    def maximals(self) -> int:
        return sum(1 << k for k in range(len(self)) if not self.upper_covers[k])

    @cached_property
    def rank(self) -> int:
        height = [0] * len(self)
        for k in self.linear_extension:
            for a in bits(self.lower_covers[k]):
                height[k] = max(height[k], height[a] + 1)
        return max(height, default=0)

    @cached_property
    def width(self) -> int:
        # Dilworth: n minus a maximum matching in the strict comparability bipartite graph
        n = len(self)
        match_of = [-1] * n

        def augment(a: int, seen: list[bool]) -> bool:
            for b in bits(self.strictly_above[a]):
                if not seen[b]:
                    seen[b] = True
                    if match_of[b] < 0 or augment(match_of[b], seen):
                        match_of[b] = a
                        return True
            return False

        matched = sum(augment(a, [False] * n) for a in range(n))
        return n - matched

    def to_json(self) -> dict:
        return {
            "elements": [_label_text(lab) for lab in self.labels],
            "covers": [[a, b] for a, b in sorted(self.covers)],
        }


def _label_text(label) -> str:
    return str(label)


def poset_from_json(data: dict | str) -> Poset:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return Poset(data["elements"], [tuple(c) for c in data["covers"]])
    except (KeyError, TypeError) as exc:
        raise BadParameter('poset JSON must look like {"elements": [...], "covers": [[a, b], ...]}') from exc


def cover_pairs_from_order(n: int, strictly_below: Sequence[int]) -> set[tuple[int, int]]:
    """Transitive reduction of a strict order given as below-masks."""
    covers = set()
    for b in range(n):
        implied = 0
        for c in bits(strictly_below[b]):
            implied |= strictly_below[c]
        for a in bits(strictly_below[b] & ~implied):
            covers.add((a, b))
    return covers


def poset_from_diagram(d: Diagram) -> Poset:
    """Cells ordered componentwise; elements listed in (row, col) order."""
    cells = sorted(d.cells)
    n = len(cells)
    below = [0] * n
    for b, (i, j) in enumerate(cells):
        m = 0
        for a, (i2, j2) in enumerate(cells):
            if a != b and i2 <= i and j2 <= j:
                m |= 1 << a
        below[b] = m
    return Poset([Cell(*c) for c in cells], cover_pairs_from_order(n, below))


def rank(p: Poset) -> int:
    return p.rank


def minimals(p: Poset) -> set:
    return set(p.label_set(p.minimals))


def maximals(p: Poset) -> set:
    return set(p.label_set(p.maximals))


def width(p: Poset) -> int:
    return p.width

"""Order ideals, antichains, rowmotion and orbit averages.

An order ideal is an int bitset over the poset's elements.  The lattice J(P)
lists every ideal once, sorted by bitset value.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import CapExceeded, NotAnAntichain, NotAnIdeal
from .poset import Poset, bits

DEFAULT_IDEAL_CAP = 10**6
DEFAULT_ELEMENT_CAP = 40


def ideal_cap() -> int:
    raw = os.environ.get("TOGGLELAB_CAP")
    return int(raw) if raw else DEFAULT_IDEAL_CAP


def element_cap() -> int:
    raw = os.environ.get("TOGGLELAB_ELEMENT_CAP")
    return int(raw) if raw else DEFAULT_ELEMENT_CAP


def _as_mask(p: Poset, subset) -> int:
    if isinstance(subset, int):
        return subset
    return p.mask_of(subset)


def is_ideal(p: Poset, mask: int) -> bool:
    for k in bits(mask):
        if p.lower_covers[k] & ~mask:
            return False
    return True


def is_antichain(p: Poset, mask: int) -> bool:
    return all(not (p.strictly_below[k] & mask) for k in bits(mask))


def down_closure(p: Poset, mask: int) -> int:
    out = mask
    for k in bits(mask):
        out |= p.strictly_below[k]
    return out


def ideal_of_antichain(p: Poset, antichain) -> int:
    mask = _as_mask(p, antichain)
    if not is_antichain(p, mask):
        raise NotAnAntichain(f"{p.label_set(mask)} is not an antichain")
    return down_closure(p, mask)


def max_elements(p: Poset, ideal) -> int:
    mask = _as_mask(p, ideal)
    if not is_ideal(p, mask):
        raise NotAnIdeal(f"{p.label_set(mask)} is not an order ideal")
    return sum(1 << k for k in bits(mask) if not (p.upper_covers[k] & mask))


def min_of_complement(p: Poset, mask: int) -> int:
    """Min(P \\ I): the elements that can be toggled into ``I``."""
    out = 0
    for k in bits(p.full & ~mask):
        if not (p.lower_covers[k] & ~mask):
            out |= 1 << k
    return out


def rowmotion(p: Poset, ideal) -> int:
    mask = _as_mask(p, ideal)
    if not is_ideal(p, mask):
        raise NotAnIdeal(f"{p.label_set(mask)} is not an order ideal")
    return down_closure(p, min_of_complement(p, mask))


class Orbit(NamedTuple):
    ideals: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.ideals)


class IdealLattice:
    """All order ideals of a poset with value tables for the generators.

    ``member[k, p]``, ``removable[k, p]`` and ``addable[k, p]`` hold 𝟙_p, 𝒯⁻_p
    and 𝒯⁺_p evaluated on ideal ``k``.
    """

    def __init__(self, poset: Poset, ideals: Iterable[int]):
        self.poset = poset
        self.ideals = tuple(sorted(ideals))
        self.index = {I: k for k, I in enumerate(self.ideals)}

    def __len__(self) -> int:
        return len(self.ideals)

    def __iter__(self):
        return iter(self.ideals)

    def position(self, ideal) -> int:
        mask = _as_mask(self.poset, ideal)
        try:
            return self.index[mask]
        except KeyError:
            raise NotAnIdeal(f"{self.poset.label_set(mask)} is not an order ideal") from None

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        p = self.poset
        n, size = len(p), len(self.ideals)
        member = np.zeros((size, n), dtype=np.int64)
        removable = np.zeros((size, n), dtype=np.int64)
        addable = np.zeros((size, n), dtype=np.int64)
        if n <= 62:
            arr = np.array(self.ideals, dtype=np.int64)
            for k in range(n):
                inside = (arr >> k) & 1
                lo, up = p.lower_covers[k], p.upper_covers[k]
                member[:, k] = inside
                removable[:, k] = inside & ((arr & up) == 0)
                addable[:, k] = (1 - inside) & ((arr & lo) == lo)
        else:
            for t, I in enumerate(self.ideals):
                for k in range(n):
                    if I >> k & 1:
                        member[t, k] = 1
                        removable[t, k] = not (p.upper_covers[k] & I)
                    else:
                        addable[t, k] = not (p.lower_covers[k] & ~I)
        for table in (member, removable, addable):
            table.setflags(write=False)
        return member, removable, addable

    @property
    def member(self) -> np.ndarray:
        return self._tables[0]

    @property
    def removable(self) -> np.ndarray:
        return self._tables[1]

    @property
    def addable(self) -> np.ndarray:
        return self._tables[2]

    @cached_property
    def rowmotion_map(self) -> tuple[int, ...]:
        p = self.poset
        return tuple(self.index[down_closure(p, min_of_complement(p, I))] for I in self.ideals)

    @cached_property
    def orbits(self) -> tuple[Orbit, ...]:
        nxt = self.rowmotion_map
        seen = [False] * len(self.ideals)
        out = []
        for start in range(len(self.ideals)):
            if seen[start]:
                continue
            cyc = []
            k = start
            while not seen[k]:
                seen[k] = True
                cyc.append(k)
                k = nxt[k]
            out.append(Orbit(tuple(cyc)))
        return tuple(out)

    def orbit_report(self, cycles: bool = False) -> dict:
        report = {
            "orbit_sizes": sorted(len(o) for o in self.orbits),
            "num_ideals": len(self.ideals),
        }
        if cycles:
            report["cycles"] = [
                [[str(lab) for lab in self.poset.label_set(self.ideals[k])] for k in o.ideals]
                for o in self.orbits
            ]
        return report


def enumerate_ideals(p: Poset, cap: int | None = None, max_elements: int | None = None) -> IdealLattice:
    """Grow ideals along a linear extension: element ``e`` may join ``I`` iff its
    lower covers are already in ``I``, so every branch ends at a distinct ideal."""
    cap = ideal_cap() if cap is None else cap
    max_elements = element_cap() if max_elements is None else max_elements
    if len(p) > max_elements:
        raise CapExceeded(f"poset has {len(p)} elements, cap is {max_elements}", len(p))
    ideals = [0]
    for e in p.linear_extension:
        lo, bit = p.lower_covers[e], 1 << e
        grown = [I | bit for I in ideals if not (lo & ~I)]
        ideals.extend(grown)
        if len(ideals) > cap:
            raise CapExceeded(f"more than {cap} order ideals", len(ideals))
    return IdealLattice(p, ideals)


def orbits(p: Poset, lattice: IdealLattice) -> tuple[Orbit, ...]:
    if lattice.poset is not p and lattice.poset != p:
        raise ValueError("lattice was built for a different poset")
    return lattice.orbits


def orbit_sums(lattice: IdealLattice, vector) -> list[Fraction]:
    return [sum((Fraction(vector[k]) for k in o.ideals), Fraction(0)) for o in lattice.orbits]


def is_d_mesic(lattice: IdealLattice, f, d) -> bool:
    """Every rowmotion orbit averages exactly ``d``.  ``f`` is a statistic or a vector."""
    vector = f.as_vector(lattice) if hasattr(f, "as_vector") else f
    d = Fraction(d)
    return all(s == d * len(o) for s, o in zip(orbit_sums(lattice, vector), lattice.orbits))

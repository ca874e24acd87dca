"""Statistics on order ideals: rational combinations of five generator kinds.

``CONST`` is 1 everywhere; for an element ``p`` of the poset

* ``IND(p)`` is 1 when ``p`` is in the ideal,
* ``AMINUS(p)`` is 1 when ``p`` is a maximal element of the ideal,
* ``APLUS(p)`` is 1 when ``p`` is outside the ideal but adding it gives an ideal,
* ``TOG(p)`` is ``APLUS(p) - AMINUS(p)``.

Elements are referred to by their index in the poset.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import BadParameter, NotAnIdeal
from .lattice import IdealLattice, is_ideal
from .poset import Poset

CONST, IND, AMINUS, APLUS, TOG = "const", "ind", "aminus", "aplus", "tog"
KINDS = (CONST, IND, AMINUS, APLUS, TOG)


class Generator(NamedTuple):
    kind: str
    element: int | None = None

    def sort_key(self) -> tuple[int, int]:
        return KINDS.index(self.kind), -1 if self.element is None else self.element


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"coefficients must be exact rationals, got {x!r}")


class Statistic:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Generator, object] | Iterable[tuple[Generator, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Generator, Fraction] = {}
        for gen, coef in items:
            gen = Generator(*gen)
            if gen.kind not in KINDS:
                raise BadParameter(f"unknown generator kind {gen.kind!r}")
            if (gen.kind == CONST) != (gen.element is None):
                raise BadParameter(f"malformed generator {gen}")
            acc[gen] = acc.get(gen, Fraction(0)) + _frac(coef)
        self._terms = tuple(sorted(((g, c) for g, c in acc.items() if c), key=lambda t: t[0].sort_key()))
        self._hash = None

    @property
    def terms(self) -> dict[Generator, Fraction]:
        return dict(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Statistic) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __add__(self, other: Statistic) -> Statistic:
        if not isinstance(other, Statistic):
            return NotImplemented
        return Statistic(list(self._terms) + list(other._terms))

    def __neg__(self) -> Statistic:
        return Statistic((g, -c) for g, c in self._terms)

    def __sub__(self, other: Statistic) -> Statistic:
        if not isinstance(other, Statistic):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> Statistic:
        s = _frac(scalar)
        return Statistic((g, s * c) for g, c in self._terms)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self._terms:
            return "Statistic(0)"
        parts = []
        for g, c in self._terms:
            name = "1" if g.kind == CONST else f"{g.kind}[{g.element}]"
            parts.append(f"{c}*{name}")
        return "Statistic(" + " + ".join(parts) + ")"

    def coefficient(self, gen: Generator) -> Fraction:
        return self.terms.get(Generator(*gen), Fraction(0))

    @property
    def constant(self) -> Fraction:
        return self.coefficient(Generator(CONST))

    def support(self, kind: str) -> dict[int, Fraction]:
        return {g.element: c for g, c in self._terms if g.kind == kind}

    def kinds(self) -> set[str]:
        return {g.kind for g, _ in self._terms}

    def expand_toggles(self) -> Statistic:
        """Rewrite every ``TOG(p)`` as ``APLUS(p) - AMINUS(p)``."""
        out = []
        for g, c in self._terms:
            if g.kind == TOG:
                out.append((Generator(APLUS, g.element), c))
                out.append((Generator(AMINUS, g.element), -c))
            else:
                out.append((g, c))
        return Statistic(out)

    def evaluate(self, poset: Poset, ideal) -> Fraction:
        return evaluate(poset, self, ideal)

    def as_vector(self, lattice: IdealLattice) -> list[Fraction]:
        return as_vector(lattice, self)

    def to_json(self, poset: Poset) -> dict:
        out: dict = {"const": str(self.constant)}
        for kind in (IND, AMINUS, APLUS, TOG):
            out[kind] = {str(poset.labels[e]): str(c) for e, c in sorted(self.support(kind).items())}
        return out


def constant(q=1) -> Statistic:
    return Statistic({Generator(CONST): q})


def zero() -> Statistic:
    return Statistic()


def ind(p: int) -> Statistic:
    return Statistic({Generator(IND, p): 1})


def aminus(p: int) -> Statistic:
    return Statistic({Generator(AMINUS, p): 1})


def aplus(p: int) -> Statistic:
    return Statistic({Generator(APLUS, p): 1})


def tog(p: int) -> Statistic:
    return Statistic({Generator(TOG, p): 1})


def linear_combination(pairs: Iterable[tuple[object, Statistic]]) -> Statistic:
    terms = []
    for coef, stat in pairs:
        c = _frac(coef)
        terms.extend((g, c * v) for g, v in stat)
    return Statistic(terms)


def _check_elements(poset: Poset, f: Statistic) -> None:
    n = len(poset)
    for g, _ in f:
        if g.kind != CONST and not (0 <= g.element < n):
            raise BadParameter(f"generator {g} refers to a missing element")


def generator_value(poset: Poset, gen: Generator, ideal: int) -> int:
    if gen.kind == CONST:
        return 1
    p = gen.element
    inside = bool(ideal >> p & 1)
    if gen.kind == IND:
        return int(inside)
    removable = inside and not (poset.upper_covers[p] & ideal)
    addable = not inside and not (poset.lower_covers[p] & ~ideal)
    if gen.kind == AMINUS:
        return int(removable)
    if gen.kind == APLUS:
        return int(addable)
    return int(addable) - int(removable)


def evaluate(poset: Poset, f: Statistic, ideal) -> Fraction:
    mask = ideal if isinstance(ideal, int) else poset.mask_of(ideal)
    if not is_ideal(poset, mask):
        raise NotAnIdeal(f"{poset.label_set(mask)} is not an order ideal")
    _check_elements(poset, f)
    return sum((c * generator_value(poset, g, mask) for g, c in f), Fraction(0))


def integer_vector(lattice: IdealLattice, f: Statistic) -> tuple[np.ndarray, int]:
    """``(v, D)`` with ``v / D`` the values of ``f`` over the lattice; ``v`` holds ints."""
    poset = lattice.poset
    _check_elements(poset, f)
    n = len(poset)
    den = 1
    for _, c in f:
        den = lcm(den, c.denominator)
    big = any(abs(c * den) > 2**40 for _, c in f)
    dtype = object if big else np.int64
    coefs = {kind: np.zeros(n, dtype=dtype) for kind in (IND, AMINUS, APLUS)}
    const = 0
    for g, c in f:
        v = int(c * den)
        if g.kind == CONST:
            const += v
        elif g.kind == TOG:
            coefs[APLUS][g.element] += v
            coefs[AMINUS][g.element] -= v
        else:
            coefs[g.kind][g.element] += v
    out = np.full(len(lattice), const, dtype=dtype)
    if f.kinds() - {CONST}:
        if dtype is object:
            out = out + lattice.member.astype(object) @ coefs[IND]
            out = out + lattice.removable.astype(object) @ coefs[AMINUS]
            out = out + lattice.addable.astype(object) @ coefs[APLUS]
        else:
            out = out + lattice.member @ coefs[IND] + lattice.removable @ coefs[AMINUS] + lattice.addable @ coefs[APLUS]
    return out, den


def as_vector(lattice: IdealLattice, f: Statistic) -> list[Fraction]:
    v, den = integer_vector(lattice, f)
    return [Fraction(int(x), den) for x in v]


def statistic_from_json(poset: Poset, data: dict | str) -> Statistic:
    if isinstance(data, str):
        data = json.loads(data)
    by_text = {str(lab): k for k, lab in enumerate(poset.labels)}
    terms = []
    if "const" in data:
        terms.append((Generator(CONST), Fraction(str(data["const"]))))
    for kind in (IND, AMINUS, APLUS, TOG):
        for label, coef in data.get(kind, {}).items():
            if label not in by_text:
                raise BadParameter(f"unknown element label {label!r}")
            terms.append((Generator(kind, by_text[label]), Fraction(str(coef))))
    return Statistic(terms)

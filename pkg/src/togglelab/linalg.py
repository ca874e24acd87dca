"""Exact linear algebra over the rationals.

Matrices are numpy arrays of ``dtype=object`` holding Python ints, so numpy
does the bookkeeping while the integers stay arbitrary precision.  Rational
input rows are cleared of denominators first; that rescales rows and so never
changes a row space.  Elimination is fraction-free (Bareiss): after step ``k``
every live entry is a ``(k+1)``-minor of the input, so the division by the
previous pivot is exact and entries grow only polynomially.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import AmbientMismatch, DependentGenerators, NotInSpan


def _as_int_row(row: Iterable) -> list[int]:
    vals = list(row)
    den = 1
    for x in vals:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    if den == 1:
        return [int(x) for x in vals]
    return [int(x * den) for x in vals]


def integer_matrix(rows, width: int | None = None) -> np.ndarray:
    """Object array of Python ints; each row is scaled to clear its denominators."""
    if isinstance(rows, np.ndarray) and rows.dtype != object:
        out = rows.astype(object)
        if out.ndim == 1:
            out = out.reshape(1, -1)
        return out
    int_rows = [_as_int_row(r) for r in rows]
    if not int_rows:
        return np.zeros((0, width or 0), dtype=object)
    out = np.empty((len(int_rows), len(int_rows[0])), dtype=object)
    for k, r in enumerate(int_rows):
        if len(r) != out.shape[1]:
            raise ValueError("rows have different lengths")
        out[k, :] = r
    return out


def _eliminate(a: np.ndarray, ncols: int | None = None):
    """In-place Bareiss forward elimination on the first ``ncols`` columns.

    Returns ``(rank, pivot_columns, swaps)``.  Rows ``rank:`` end up zero on
    those columns; rows ``:rank`` are in echelon form.
    """
    nrows = a.shape[0]
    ncols = a.shape[1] if ncols is None else ncols
    prev = 1
    r = 0
    pivots: list[int] = []
    swaps = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[np.argmin(np.abs(col[nz]).astype(object))]) if nz.size > 1 else r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
            swaps += 1
        piv = a[r, c]
        if r + 1 < nrows:
            below = a[r + 1 :]
            a[r + 1 :] = (piv * below - np.outer(below[:, c], a[r])) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return r, pivots, swaps


def _primitive(row: np.ndarray) -> np.ndarray:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return row // g
    return row


def row_echelon(rows) -> tuple[np.ndarray, list[int]]:
    """Integer echelon basis of the row space (primitive rows) and its pivot columns."""
    a = integer_matrix(rows).copy()
    r, pivots, _ = _eliminate(a)
    echelon = np.array([_primitive(a[k]) for k in range(r)], dtype=object).reshape(r, a.shape[1])
    return echelon, pivots


def rank(rows) -> int:
    a = integer_matrix(rows).copy()
    return _eliminate(a)[0]


def det(rows) -> int:
    a = integer_matrix(rows).copy()
    n, m = a.shape
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    r, _, swaps = _eliminate(a)
    if r < n:
        return 0
    d = a[n - 1, n - 1]
    return -d if swaps % 2 else d


def left_nullspace(rows) -> list[list[int]]:
    """Integer basis of ``{x : x M = 0}``."""
    a = integer_matrix(rows)
    n, m = a.shape
    aug = np.concatenate([a, np.identity(n, dtype=int).astype(object)], axis=1)
    r, _, _ = _eliminate(aug, m)
    return [list(_primitive(aug[k, m:])) for k in range(r, n)]


def _fraction_solve(square: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve ``x S = b`` for every row ``b`` of ``rhs`` (``S`` nonsingular)."""
    g = len(square)
    # transpose: S^T x^T = b^T, eliminate on [S^T | B^T]
    aug = [[Fraction(square[c][r]) for c in range(g)] + [Fraction(b[r]) for b in rhs] for r in range(g)]
    for c in range(g):
        p = next(k for k in range(c, g) if aug[k][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for k in range(g):
            if k != c and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [x - f * y for x, y in zip(aug[k], aug[c])]
    return [[aug[r][g + t] for r in range(g)] for t in range(len(rhs))]


def solve_left(generators, targets) -> list[list[Fraction]]:
    """Coefficients ``x`` with ``x G = v`` for each target row ``v``.

    ``G`` must have independent rows; a dependency is reported with a witness.
    """
    gen = integer_matrix(generators)
    g = gen.shape[0]
    echelon, pivots = row_echelon(gen)
    if len(pivots) < g:
        witness = left_nullspace(gen)[0]
        raise DependentGenerators("generators are linearly dependent", witness)
    square = [[Fraction(int(gen[r, c])) for c in pivots] for r in range(g)]
    targets = [[Fraction(x) for x in v] for v in targets]
    rhs = [[v[c] for c in pivots] for v in targets]
    sols = _fraction_solve(square, rhs) if targets else []
    for k, (x, v) in enumerate(zip(sols, targets)):
        recon = [sum((x[r] * int(gen[r, c]) for r in range(g) if x[r]), Fraction(0)) for c in range(gen.shape[1])]
        if recon != v:
            raise NotInSpan(f"target {k} is not in the span of the generators")
    return sols


def check_mode() -> bool:
    return os.environ.get("TOGGLELAB_CHECK", "") not in ("", "0")


class Subspace:
    """Row space of a set of rational vectors of fixed length."""

    def __init__(self, rows, ambient_dim: int | None = None):
        mat = integer_matrix(rows, ambient_dim)
        if ambient_dim is None:
            ambient_dim = mat.shape[1]
        elif mat.shape[0] and mat.shape[1] != ambient_dim:
            raise AmbientMismatch(f"rows have length {mat.shape[1]}, expected {ambient_dim}")
        self.ambient_dim = ambient_dim
        self.rows, self.pivots = row_echelon(mat) if mat.shape[0] else (mat.reshape(0, ambient_dim), [])

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self) -> int:
        return self.dim

    def _same_ambient(self, other: Subspace) -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def rref(self) -> list[list[Fraction]]:
        """Reduced row echelon basis with unit pivots."""
        out = [[Fraction(int(x)) for x in row] for row in self.rows]
        for k in range(len(out) - 1, -1, -1):
            c = self.pivots[k]
            p = out[k][c]
            out[k] = [x / p for x in out[k]]
            for t in range(k):
                f = out[t][c]
                if f:
                    out[t] = [x - f * y for x, y in zip(out[t], out[k])]
        return out

    def contains(self, vector: Sequence) -> bool:
        if len(vector) != self.ambient_dim:
            raise AmbientMismatch("vector length does not match the ambient dimension")
        if self.dim == 0:
            return not any(vector)
        stacked = np.concatenate([self.rows, integer_matrix([vector])], axis=0)
        return rank(stacked) == self.dim

    def __add__(self, other: Subspace) -> Subspace:
        self._same_ambient(other)
        return Subspace(np.concatenate([self.rows, other.rows], axis=0), self.ambient_dim)

    def intersection_combinations(self, other: Subspace) -> list[tuple[list[int], list[int]]]:
        """Pairs ``(x, y)`` with ``x A = -y B`` spanning all such relations."""
        self._same_ambient(other)
        stacked = np.concatenate([self.rows, other.rows], axis=0)
        null = left_nullspace(stacked) if stacked.shape[0] else []
        return [(v[: self.dim], v[self.dim :]) for v in null]

    def intersection(self, other: Subspace) -> Subspace:
        combos = self.intersection_combinations(other)
        vecs = [np.dot(np.array(x, dtype=object), self.rows) for x, _ in combos]
        return Subspace(vecs, self.ambient_dim) if vecs else Subspace([], self.ambient_dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace) or self.ambient_dim != other.ambient_dim:
            return False
        return self.dim == other.dim == (self + other).dim

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def intersection_dim(a: Subspace, b: Subspace, check: bool | None = None) -> int:
    """``dim(A ∩ B)``, counted as the left nullity of the stacked bases."""
    a._same_ambient(b)
    d = len(a.intersection_combinations(b))
    if check_mode() if check is None else check:
        via_ranks = a.dim + b.dim - (a + b).dim
        if via_ranks != d:
            raise AssertionError(f"intersection dimension mismatch: {d} vs {via_ranks}")
    return d

"""Exact rational linear algebra: the substrate for every sign decision.

Scalars are `fractions.Fraction` throughout and no floating point enters
this module.  Determinants run fraction-free Bareiss elimination on an
integer rescaling of the input, so intermediate values stay integral and
every division is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

PLUS = 1
ZERO = 0
MINUS = -1

_SIGN_CHARS = {PLUS: "+", ZERO: "0", MINUS: "-"}


def rational(x: int | str | Fraction) -> Fraction:
    """Parse a value exactly; decimal strings like "-0.97" become -97/100."""
    return Fraction(x)


def sign(x) -> int:
    """Sign of a rational number as +1, 0 or -1."""
    if x > 0:
        return PLUS
    if x < 0:
        return MINUS
    return ZERO


def sign_str(s: int) -> str:
    return _SIGN_CHARS[s]


def permutation_parity(perm: Sequence[int]) -> int:
    """Parity of a permutation of 0..k-1: +1 if even, -1 if odd."""
    k = len(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"not a permutation of 0..{k - 1}: {perm!r}")
    seen = [False] * k
    parity = 1
    for start in range(k):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def sort_parity(seq: Sequence) -> int:
    """Parity of the permutation that sorts `seq` (distinct keys) ascending."""
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    return permutation_parity(order)


class Matrix:
    """Immutable rational matrix, row-major."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("rows have unequal lengths")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in col_idx] for i in row_idx])

    def replace_column(self, j: int, column: Sequence) -> "Matrix":
        return Matrix(
            [
                [Fraction(column[i]) if c == j else x for c, x in enumerate(row)]
                for i, row in enumerate(self.rows)
            ]
        )

    def det(self) -> Fraction:
        return det(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"Matrix({body})"


def _as_rows(m) -> tuple[tuple[Fraction, ...], ...]:
    if isinstance(m, Matrix):
        return m.rows
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def _bareiss_int(a: list[list[int]], check: bool = False) -> int:
    """Fraction-free elimination on an integer matrix (mutates `a`).

    With `check` set, verifies that every interior division is exact,
    which is the defining property of the algorithm.
    """
    n = len(a)
    sign_acc = 1
    prev = 1
    for j in range(n - 1):
        piv = j
        while piv < n and a[piv][j] == 0:
            piv += 1
        if piv == n:
            return 0
        if piv != j:
            a[j], a[piv] = a[piv], a[j]
            sign_acc = -sign_acc
        pivot = a[j][j]
        for i in range(j + 1, n):
            row_i, row_j = a[i], a[j]
            head = row_i[j]
            for c in range(j + 1, n):
                num = row_i[c] * pivot - head * row_j[c]
                if check and num % prev != 0:
                    raise ArithmeticError("inexact division in Bareiss step")
                row_i[c] = num // prev
            row_i[j] = 0
        prev = pivot
    return sign_acc * a[n - 1][n - 1]


def det(m) -> Fraction:
    """Exact determinant of a square rational matrix (Bareiss elimination)."""
    rows = _as_rows(m)
    k = len(rows)
    if any(len(row) != k for row in rows):
        raise ValueError(f"determinant requires a square matrix, got {k} rows")
    if k == 0:
        return Fraction(1)
    scale = 1
    work = []
    for row in rows:
        d = 1
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
        scale *= d
        work.append([int(x * d) for x in row])
    return Fraction(_bareiss_int(work), scale)


def sign_det(m) -> int:
    """Sign of the determinant, computed exactly."""
    return sign(det(m))


def reduce_unit_rows(
    rows: Sequence[Sequence[Fraction]], units: dict[int, int]
) -> tuple[int, list[list[Fraction]]]:
    """Strip unit rows out of a square matrix by Laplace expansion.

    `units` maps row positions to the column holding that row's single 1.
    Returns the accumulated cofactor sign and the remaining dense block,
    whose determinant times the sign equals the original determinant.
    """
    row_ids = list(range(len(rows)))
    col_ids = list(range(len(rows)))
    parity = 1
    for r in sorted(units):
        p = row_ids.index(r)
        c = col_ids.index(units[r])
        parity *= (-1) ** (p + c)
        del row_ids[p]
        del col_ids[c]
    dense = [[rows[r][c] for c in col_ids] for r in row_ids]
    return parity, dense

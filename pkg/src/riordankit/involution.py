"""Riordan involutions: row-by-row construction, recognition, and the Klein four-group.

Every nontrivial involution has diagonal ``s, -s, s, -s, ...`` and is fixed
by ``s = d_{0,0}`` together with a free series ``alpha``: ``alpha_{2i}`` sits
at ``(2i+1, 0)`` and ``alpha_{2i+1}`` at ``(2i+2, 1)``.  All other entries
follow from the rules implemented by :class:`InvolutionRows`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import DomainError
from .fps import Series
from .riordan import RiordanMatrix, mul

# Row values are Fractions or affine expressions; see affine.LinExpr.
Value = Any


class InvolutionRows:
    """Incremental builder for the rows of a nontrivial involution.

    Row ``m >= 2`` is produced in dependency order:

    1. entries ``(m, j)``, ``j >= 2``, from the A-sequence ``a_0 .. a_{m-2}``;
    2. ``(m, 1)``: free when ``m`` is even, else
       ``-(1/(2 d_{1,1})) sum_{k=2}^{m-1} d_{m,k} d_{k,1}``;
    3. ``a_{m-1} = (d_{m,1} - sum_{j<m-1} a_j d_{m-1,j}) / d_{m-1,m-1}``;
    4. ``(m, 0)``: free when ``m`` is odd, else
       ``-(1/(2 d_{0,0})) sum_{k=1}^{m-1} d_{m,k} d_{k,0}``.

    With ``fixed_a`` the whole A-sequence is given in advance; then
    ``(m, 1)`` comes from the A-recursion for every ``m`` and only the
    odd-row ``(m, 0)`` entries are free.  Values may be affine
    expressions; products only ever pair a pending value with a settled one.
    """

    def __init__(self, sign: int, fixed_a: Sequence[Fraction] | None = None):
        if sign not in (1, -1):
            raise DomainError("involution sign must be +1 or -1")
        self.sign = sign
        self.rows: list[list[Value]] = [[Fraction(sign)]]
        self.a: list[Value] = list(fixed_a) if fixed_a is not None else []
        self._fixed = fixed_a is not None

    @property
    def order(self) -> int:
        return len(self.rows) - 1

    def add_row(self, free: Value = None) -> list[Value]:
        m = len(self.rows)
        rows, a = self.rows, self.a
        if m == 1:
            if not self._fixed:
                a.append(Fraction(-1))
            row = [free, Fraction(-self.sign)]
            rows.append(row)
            return row
        prev = rows[m - 1]
        row: list[Value] = [None] * (m + 1)
        for j in range(2, m + 1):
            row[j] = sum((a[k] * prev[j - 1 + k] for k in range(m - j + 1)), Fraction(0))
        if self._fixed:
            row[1] = sum((a[k] * prev[k] for k in range(m)), Fraction(0))
        elif m % 2 == 0:
            row[1] = free
        else:
            s = sum((row[k] * rows[k][1] for k in range(2, m)), Fraction(0))
            row[1] = -s / (2 * rows[1][1])
        if not self._fixed:
            s = sum((a[j] * prev[j] for j in range(m - 1)), Fraction(0))
            a.append((row[1] - s) / prev[m - 1])
        if m % 2 == 1:
            row[0] = free
        else:
            s = sum((row[k] * rows[k][0] for k in range(1, m)), Fraction(0))
            row[0] = -s / (2 * rows[0][0])
        rows.append(row)
        return row

    def settle(self, fn) -> None:
        """Apply ``fn`` to every stored value (used to substitute solved unknowns)."""
        self.rows = [[fn(v) for v in row] for row in self.rows]
        self.a = [fn(v) for v in self.a]

    def matrix(self) -> RiordanMatrix:
        return RiordanMatrix.from_rows(self.rows)


@dataclass(frozen=True)
class InvolutionSpec:
    sign: int
    alpha: Series

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("involution sign must be +1 or -1")


def build_involution(spec: InvolutionSpec, n: int) -> RiordanMatrix:
    """The unique nontrivial involution of order ``n`` with the given sign and free entries."""
    if n < 0:
        raise DomainError("order must be non-negative")
    if n >= 1 and len(spec.alpha) < n:
        raise DomainError(
            f"order {n} needs {n} free coefficients, alpha provides {len(spec.alpha)}"
        )
    b = InvolutionRows(spec.sign)
    for m in range(1, n + 1):
        b.add_row(spec.alpha[m - 1])
    return b.matrix()


def is_involution(m: RiordanMatrix) -> bool:
    return mul(m, m).is_identity()


def is_trivial(m: RiordanMatrix) -> bool:
    """``m`` is ``I`` or ``-I``."""
    d = m.rows[0][0]
    return d in (1, -1) and all(
        v == (d if i == j else 0) for i, row in enumerate(m.rows) for j, v in enumerate(row)
    )


def read_spec(m: RiordanMatrix) -> InvolutionSpec:
    if not is_involution(m):
        raise DomainError("matrix is not an involution")
    if is_trivial(m):
        raise DomainError("trivial involutions (I, -I) have no alpha parameters")
    n = m.order
    rows = m.rows
    alpha = [rows[k + 1][0] if k % 2 == 0 else rows[k + 1][1] for k in range(n)]
    return InvolutionSpec(int(rows[0][0]), Series(alpha))


class Klein(enum.Enum):
    I = (1, 1)
    NEG_I = (-1, 1)
    IPLUS0 = (1, -1)
    IMINUS0 = (-1, -1)

    @property
    def d0(self) -> int:
        return self.value[0]

    @property
    def h1(self) -> int:
        return self.value[1]

    @classmethod
    def from_signs(cls, d0, h1) -> Klein:
        for k in cls:
            if k.value == (d0, h1):
                return k
        raise DomainError(f"diagonal signs (d0, h1) = ({d0}, {h1}) are not both +-1")

    def __mul__(self, other: Klein) -> Klein:
        return Klein.from_signs(self.d0 * other.d0, self.h1 * other.h1)


def klein(which: Klein | str, n: int) -> RiordanMatrix:
    if isinstance(which, str):
        try:
            which = Klein[which]
        except KeyError:
            raise DomainError(f"unknown Klein element {which!r}") from None
    return RiordanMatrix.diagonal(which.d0, which.h1, n)

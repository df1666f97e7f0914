"""Truncated Riordan matrices.

A Riordan matrix ``(d, h)`` of order ``n`` is the ``(n+1) x (n+1)`` lower
triangular array with entries ``[x^i] d(x) h(x)^j``.  Both the defining
pair and the materialised entries are kept: entries are the source of
truth for equality, the pair drives the closed-form group operations, and
under ``__debug__`` each closed-form result is cross-checked against plain
matrix arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, TruncationMismatch
from .fps import RationalLike, Series, as_rational

Rows = tuple[tuple[Fraction, ...], ...]


def _columns(d: Series, h: Series) -> list[Series]:
    cols = [d]
    for _ in range(d.order):
        cols.append(cols[-1] * h)
    return cols


def _check_pair(d: Series, h: Series) -> None:
    if d.order != h.order:
        raise TruncationMismatch(f"d has order {d.order} but h has order {h.order}")
    if d[0] == 0:
        raise DomainError("d(0) must be nonzero")
    if h[0] != 0:
        raise DomainError("h(0) must be zero")
    if h.order >= 1 and h[1] == 0:
        raise DomainError("h'(0) must be nonzero")


class RiordanMatrix:
    """Immutable Riordan matrix of a fixed truncation order."""

    __slots__ = ("_d", "_h", "_rows")

    def __init__(self, d: Series, h: Series, rows: Rows):
        self._d = d
        self._h = h
        self._rows = rows

    # -- construction -------------------------------------------------

    @classmethod
    def from_dh(cls, d: Series, h: Series) -> RiordanMatrix:
        _check_pair(d, h)
        n = d.order
        cols = _columns(d, h)
        rows = tuple(tuple(cols[j][i] for j in range(i + 1)) for i in range(n + 1))
        return cls(d, h, rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> RiordanMatrix:
        """Recover ``(d, h)`` from a lower-triangular array and check it is Riordan."""
        n = len(rows) - 1
        if n < 0:
            raise DomainError("empty matrix")
        for i, row in enumerate(rows):
            if len(row) != i + 1:
                raise DomainError(f"row {i} must have {i + 1} entries, found {len(row)}")
        clean = tuple(tuple(as_rational(v) for v in row) for row in rows)
        d = Series(row[0] for row in clean)
        if d[0] == 0:
            raise DomainError("d(0) must be nonzero")
        if n == 0:
            h = Series.zero(0)
        else:
            col1 = Series([0] + [clean[i][1] for i in range(1, n + 1)])
            h = col1 / d
        m = cls.from_dh(d, h)
        if m._rows != clean:
            bad = next(
                (i, j)
                for i in range(n + 1)
                for j in range(i + 1)
                if m._rows[i][j] != clean[i][j]
            )
            raise DomainError(
                f"not a Riordan matrix: entry {bad} disagrees with d*h^j"
            )
        return m

    @classmethod
    def identity(cls, n: int) -> RiordanMatrix:
        return cls.from_dh(Series.one(n), Series.x(n))

    @classmethod
    def diagonal(cls, d0: RationalLike, h1: RationalLike, n: int) -> RiordanMatrix:
        return cls.from_dh(Series.constant(d0, n), Series.monomial(1, n, h1))

    # -- accessors ----------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._rows) - 1

    @property
    def d(self) -> Series:
        return self._d

    @property
    def h(self) -> Series:
        return self._h

    @property
    def rows(self) -> Rows:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if j > i:
            return Fraction(0)
        return self._rows[i][j]

    def diag(self) -> tuple[Fraction, ...]:
        return tuple(self._rows[i][i] for i in range(self.order + 1))

    @property
    def d0(self) -> Fraction:
        return self._d[0]

    @property
    def h1(self) -> Fraction:
        """Linear coefficient of ``h``, read off the diagonal so it exists at order 0."""
        if self.order == 0:
            return Fraction(1)
        return self._h[1]

    def is_identity(self) -> bool:
        return all(
            v == (1 if i == j else 0)
            for i, row in enumerate(self._rows)
            for j, v in enumerate(row)
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, RiordanMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"RiordanMatrix(d={self._d!r}, h={self._h!r})"

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self._rows)

    def __matmul__(self, other: RiordanMatrix) -> RiordanMatrix:
        return mul(self, other)

    def __mul__(self, other: RiordanMatrix) -> RiordanMatrix:
        if not isinstance(other, RiordanMatrix):
            return NotImplemented
        return mul(self, other)


@dataclass(frozen=True)
class FgPair:
    """The ``T(f|g)`` parameterisation: entries ``[x^i] x^j f / g^(j+1)``."""

    f: Series
    g: Series

    def __post_init__(self):
        if self.f.order != self.g.order:
            raise TruncationMismatch("f and g must share a truncation order")
        if self.f[0] == 0 or self.g[0] == 0:
            raise DomainError("f(0) and g(0) must be nonzero")

    def normalized(self) -> FgPair:
        """The canonical pair with the same matrix (top coefficient of ``g`` zeroed).

        An order-``n`` matrix fixes only ``g_0 .. g_{n-1}``; ``f`` follows as ``d*g``.
        """
        return to_fg(from_fg(self))


def from_dh(d: Series, h: Series) -> RiordanMatrix:
    return RiordanMatrix.from_dh(d, h)


def from_fg(p: FgPair) -> RiordanMatrix:
    n = p.g.order
    return RiordanMatrix.from_dh(p.f / p.g, Series.x(n) / p.g)


def to_fg(m: RiordanMatrix) -> FgPair:
    """``g = x/h`` and ``f = d*g``; the unobservable ``g_n`` is set to zero."""
    n = m.order
    if n == 0:
        g = Series.one(0)
    else:
        g_low = Series.one(n - 1) / m.h.shift_down(1)
        g = Series(g_low.coeffs + (Fraction(0),))
    return FgPair(m.d * g, g)


def _matrix_product(a: Rows, b: Rows) -> Rows:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(j, i + 1)), Fraction(0)) for j in range(i + 1))
        for i in range(n)
    )


def _same_order(a: RiordanMatrix, b: RiordanMatrix) -> None:
    if a.order != b.order:
        raise TruncationMismatch(f"matrix orders differ: {a.order} vs {b.order}")


def mul(a: RiordanMatrix, b: RiordanMatrix) -> RiordanMatrix:
    """``(d,h)(l,m) = (d * l(h), m(h))``."""
    _same_order(a, b)
    out = RiordanMatrix.from_dh(a.d * b.d.compose(a.h), b.h.compose(a.h))
    if __debug__:
        assert out.rows == _matrix_product(a.rows, b.rows), "Riordan product disagrees with matrix product"
    return out


def inverse(a: RiordanMatrix) -> RiordanMatrix:
    """``(d,h)^{-1} = (1/d(hbar), hbar)`` with ``hbar`` the compositional inverse of ``h``."""
    hbar = a.h.comp_inverse()
    out = RiordanMatrix.from_dh(a.d.compose(hbar).inverse(), hbar)
    if __debug__:
        assert _matrix_product(a.rows, out.rows) == RiordanMatrix.identity(a.order).rows
    return out


def power(a: RiordanMatrix, k: int) -> RiordanMatrix:
    if k < 0:
        return power(inverse(a), -k)
    out = RiordanMatrix.identity(a.order)
    for _ in range(k):
        out = mul(out, a)
    return out


def commutator(a: RiordanMatrix, b: RiordanMatrix) -> RiordanMatrix:
    """``a b a^{-1} b^{-1}``."""
    return mul(mul(mul(a, b), inverse(a)), inverse(b))


def project(a: RiordanMatrix) -> RiordanMatrix:
    """Delete the last row and column."""
    n = a.order
    if n == 0:
        raise DomainError("cannot project an order-0 matrix")
    d = a.d.truncate(n - 1)
    h = a.h.truncate(n - 1) if n - 1 > 0 else Series.zero(0)
    return RiordanMatrix(d, h, a.rows[:-1])


def project_to(a: RiordanMatrix, n: int) -> RiordanMatrix:
    while a.order > n:
        a = project(a)
    return a


def a_sequence(m: RiordanMatrix) -> Series:
    """Coefficients ``a_0 .. a_{n-1}`` with ``d_{i,j} = sum_k a_k d_{i-1,j-1+k}``.

    The ``j = 1`` column gives a triangular system which is solved directly.
    """
    n = m.order
    if n < 1:
        raise DomainError("the A-sequence needs order at least 1")
    rows = m.rows
    a: list[Fraction] = []
    for i in range(1, n + 1):
        acc = rows[i][1] - sum((a[k] * rows[i - 1][k] for k in range(i - 1)), Fraction(0))
        a.append(acc / rows[i - 1][i - 1])
    return Series(a)


def vertical_check(m: RiordanMatrix) -> bool:
    """Check ``d_{i,j} = sum_k g_k d_{i+1-k, j+1}`` with ``g = x/h``."""
    n = m.order
    if n < 1:
        raise DomainError("the column recursion needs order at least 1")
    g = to_fg(m).g
    rows = m.rows
    for i in range(n):
        for j in range(i + 1):
            rhs = sum((g[k] * rows[i + 1 - k][j + 1] for k in range(i - j + 1)), Fraction(0))
            if rows[i][j] != rhs:
                return False
    return True


def act(m: RiordanMatrix, s: Series) -> Series:
    """Weighted composition ``d * s(h)``."""
    if s.order != m.order:
        raise TruncationMismatch(
            f"series order {s.order} does not match matrix order {m.order}"
        )
    out = m.d * s.compose(m.h)
    if __debug__:
        col = tuple(sum((row[j] * s[j] for j in range(len(row))), Fraction(0)) for row in m.rows)
        assert out.coeffs == col, "action disagrees with matrix-vector product"
    return out


def unit_diagonal_split(m: RiordanMatrix) -> tuple[RiordanMatrix, RiordanMatrix]:
    """``(d, h) = (d/d0, h/h1) (d0, h1 x)``."""
    d0, h1 = m.d0, m.h1
    n = m.order
    u = RiordanMatrix.from_dh(m.d / d0, m.h / h1)
    return u, RiordanMatrix.diagonal(d0, h1, n)


def is_unit_diagonal(m: RiordanMatrix) -> bool:
    return m.d0 == 1 and m.h1 == 1


def is_omega0(m: RiordanMatrix) -> bool:
    """``h_2^2 = h_1 h_3``; vacuously true below order 3."""
    if m.order < 3:
        return True
    h = m.h
    return h[2] * h[2] == h[1] * h[3]


def pascal(n: int) -> RiordanMatrix:
    geo = Series.geometric(n)
    return RiordanMatrix.from_dh(geo, Series.x(n) * geo)


def identity(n: int) -> RiordanMatrix:
    return RiordanMatrix.identity(n)

"""Truncated formal power series with exact rational coefficients.

A :class:`Series` of truncation order ``N`` stores ``c_0 .. c_N``; every
coefficient beyond ``N`` is *unknown*, not zero.  Binary operations insist
that both operands carry the same order so that a projection bug cannot
hide behind silent re-truncation; use :meth:`Series.truncate` to change
order explicitly.

    >>> geo = Series.geometric(4)
    >>> geo * Series([1, -1, 0, 0, 0])
    Series(1, 0, 0, 0, 0)
    >>> Series.geometric(4).compose(Series([0, 1, 1, 0, 0]))
    Series(1, 1, 2, 3, 5)
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError, NotInvertible, TruncationMismatch

RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Series:
    """Immutable truncated power series ``c_0 + c_1 x + ... + c_N x^N``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[RationalLike]):
        c = tuple(as_rational(v) for v in coeffs)
        if not c:
            raise DomainError("a series needs at least one coefficient")
        self._c = c

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> Series:
        return cls([0] * (n + 1))

    @classmethod
    def one(cls, n: int) -> Series:
        return cls.constant(1, n)

    @classmethod
    def constant(cls, value: RationalLike, n: int) -> Series:
        return cls([value] + [0] * n)

    @classmethod
    def x(cls, n: int) -> Series:
        """The series ``x`` at order ``n`` (just ``0`` when ``n == 0``)."""
        return cls.monomial(1, n)

    @classmethod
    def monomial(cls, k: int, n: int, coeff: RationalLike = 1) -> Series:
        c = [Fraction(0)] * (n + 1)
        if k <= n:
            c[k] = as_rational(coeff)
        return cls(c)

    @classmethod
    def geometric(cls, n: int, ratio: RationalLike = 1) -> Series:
        """``1/(1 - ratio*x)``."""
        r = as_rational(ratio)
        return cls([r**k for k in range(n + 1)])

    @classmethod
    def from_polynomial(cls, coeffs: Sequence[RationalLike], n: int) -> Series:
        """Pad (or reject) a finite coefficient list to order ``n``."""
        if len(coeffs) > n + 1:
            raise TruncationMismatch(
                f"{len(coeffs)} coefficients do not fit truncation order {n}"
            )
        return cls(list(coeffs) + [0] * (n + 1 - len(coeffs)))

    @classmethod
    def parse(cls, text: str) -> Series:
        """Read the comma-separated form ``"1,1/2,-3"``."""
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(not p for p in parts):
            raise DomainError(f"malformed coefficient list {text!r}")
        try:
            return cls(Fraction(p) for p in parts)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"malformed coefficient list {text!r}: {exc}") from None

    # -- basic access -------------------------------------------------

    @property
    def order(self) -> int:
        """Truncation order ``N``."""
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    def coeff(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise TruncationMismatch(
                f"coefficient x^{k} is beyond truncation order {self.order}"
            )
        return self._c[k]

    def __getitem__(self, k: int) -> Fraction:
        return self.coeff(k)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` if all vanish."""
        for k, v in enumerate(self._c):
            if v:
                return k
        return None

    def is_unit(self) -> bool:
        return self._c[0] != 0

    def truncate(self, n: int) -> Series:
        if n > self.order:
            raise TruncationMismatch(
                f"cannot raise truncation order {self.order} to {n}"
            )
        return Series(self._c[: n + 1])

    def shift_down(self, k: int) -> Series:
        """Divide by ``x^k``; the first ``k`` coefficients must vanish.

        The result has order ``N - k`` since the top ``k`` coefficients of
        the quotient are unknown.
        """
        if any(self._c[:k]):
            raise DomainError(f"series is not divisible by x^{k}")
        if k > self.order:
            raise TruncationMismatch(f"x^{k} exceeds truncation order {self.order}")
        return Series(self._c[k:])

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: Series) -> None:
        if not isinstance(other, Series):
            raise TypeError(f"expected a Series, got {type(other).__name__}")
        if other.order != self.order:
            raise TruncationMismatch(
                f"truncation orders differ: {self.order} vs {other.order}"
            )

    def _lift(self, other) -> Series:
        if isinstance(other, Series):
            self._check(other)
            return other
        return Series.constant(as_rational(other), self.order)

    def __add__(self, other) -> Series:
        o = self._lift(other)
        return Series(a + b for a, b in zip(self._c, o._c))

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series(-a for a in self._c)

    def __sub__(self, other) -> Series:
        o = self._lift(other)
        return Series(a - b for a, b in zip(self._c, o._c))

    def __rsub__(self, other) -> Series:
        return self._lift(other) - self

    def scale(self, k: RationalLike) -> Series:
        k = as_rational(k)
        return Series(k * a for a in self._c)

    def __mul__(self, other) -> Series:
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        a, b = self._c, other._c
        n = len(a)
        out = [Fraction(0)] * n
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return Series(out)

    def __rmul__(self, other) -> Series:
        return self.scale(other)

    def inverse(self) -> Series:
        """Multiplicative inverse ``1/a``."""
        return Series.one(self.order) / self

    def __truediv__(self, other) -> Series:
        if not isinstance(other, Series):
            k = as_rational(other)
            if not k:
                raise NotInvertible("division by zero scalar")
            return self.scale(1 / k)
        self._check(other)
        b = other._c
        if not b[0]:
            raise NotInvertible("divisor has zero constant term")
        inv_b0 = 1 / b[0]
        a = self._c
        q: list[Fraction] = []
        for k in range(len(a)):
            acc = a[k]
            for j in range(max(0, k - len(b) + 1), k):
                if q[j] and b[k - j]:
                    acc -= q[j] * b[k - j]
            q.append(acc * inv_b0)
        return Series(q)

    def __rtruediv__(self, other) -> Series:
        return self._lift(other) / self

    def __pow__(self, k: int) -> Series:
        if not isinstance(k, int) or isinstance(k, bool):
            raise TypeError("series exponents must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        result = Series.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def compose(self, inner: Series) -> Series:
        """``self(inner(x))`` by Horner's rule in the truncated ring."""
        self._check(inner)
        if inner._c[0]:
            raise DomainError("inner series of a composition must have zero constant term")
        n = self.order
        acc = Series.constant(self._c[n], n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner
            acc = Series((acc._c[0] + self._c[k],) + acc._c[1:])
        return acc

    def __call__(self, inner: Series) -> Series:
        return self.compose(inner)

    def comp_inverse(self) -> Series:
        """Compositional inverse ``b`` with ``self(b) = b(self) = x``.

        Solved coefficient by coefficient: with ``b_1..b_{k-1}`` fixed the
        ``x^k`` coefficient of ``self(b)`` is ``a_1 b_k + (known terms)``.
        """
        n = self.order
        if self._c[0]:
            raise DomainError("compositional inverse needs zero constant term")
        if n == 0:
            return Series.zero(0)
        a1 = self._c[1]
        if not a1:
            raise DomainError("compositional inverse needs a nonzero linear term")
        b = [Fraction(0)] * (n + 1)
        b[1] = 1 / a1
        for k in range(2, n + 1):
            ck = self.compose(Series(b))._c[k]
            b[k] = -ck / a1
        return Series(b)

    def derivative(self) -> Series:
        """Formal derivative; the top coefficient becomes unknown so order drops by one."""
        if self.order == 0:
            raise TruncationMismatch("derivative of an order-0 series is undetermined")
        return Series(k * self._c[k] for k in range(1, len(self._c)))

    # -- comparison / display ----------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return "Series(" + ", ".join(str(v) for v in self._c) + ")"

    def to_text(self) -> str:
        return ",".join(str(v) for v in self._c)


def add(a: Series, b: Series) -> Series:
    return a + b


def mul(a: Series, b: Series) -> Series:
    return a * b


def div(a: Series, b: Series) -> Series:
    return a / b


def compose(a: Series, b: Series) -> Series:
    return a.compose(b)


def comp_inverse(a: Series) -> Series:
    return a.comp_inverse()


def pow(a: Series, k: int) -> Series:  # noqa: A001 - mirrors the operation name
    if k < 0:
        raise DomainError("pow takes a natural exponent")
    return a**k


def coeff(a: Series, k: int) -> Fraction:
    return a.coeff(k)

"""Commutators, involution factorizations, and the semidirect splitting.

The three-involution factorization never writes down closed-form
coefficients for its linear systems.  Each factor is grown row by row with
:class:`~riordankit.involution.InvolutionRows`; the free entries of a row
are affine unknowns, the product row is formed with ordinary arithmetic on
:class:`~riordankit.affine.LinExpr` values, and equality with the target is
handed to a :class:`~riordankit.affine.LinSystem`.  If any step were not
affine the arithmetic itself would raise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine import LinExpr, LinSystem, NonlinearProduct, Status
from .errors import DomainError, InternalContractError
from .fps import RationalLike, Series, as_rational
from .involution import InvolutionRows, Klein, is_involution, klein
from .riordan import RiordanMatrix, is_omega0, is_unit_diagonal, mul

KleinElement = Klein


class NotInInvolutionGroup(DomainError):
    pass


@dataclass(frozen=True)
class FactorizationCertificate:
    factors: tuple[RiordanMatrix, ...]
    target: RiordanMatrix
    verified: bool

    @property
    def width(self) -> int:
        return len(self.factors)

    def product(self) -> RiordanMatrix:
        return product(self.factors, self.target.order)


def product(factors: Sequence[RiordanMatrix], n: int) -> RiordanMatrix:
    out = RiordanMatrix.identity(n)
    for f in factors:
        out = mul(out, f)
    return out


def certify(factors: Sequence[RiordanMatrix], target: RiordanMatrix) -> FactorizationCertificate:
    factors = tuple(factors)
    ok = product(factors, target.order) == target and all(is_involution(f) for f in factors)
    return FactorizationCertificate(factors, target, ok)


# -- Klein component and membership --------------------------------------


def klein_component(m: RiordanMatrix) -> Klein:
    return Klein.from_signs(m.d0, m.h1)


def in_generated_by_involutions(m: RiordanMatrix) -> bool:
    return m.d0 in (1, -1) and m.h1 in (1, -1) and is_omega0(m)


def semidirect_decompose(m: RiordanMatrix) -> tuple[RiordanMatrix, Klein]:
    """Split ``m = C * K`` with ``C`` unit-diagonal in Omega_0 and ``K`` diagonal of order 2."""
    if not in_generated_by_involutions(m):
        raise NotInInvolutionGroup("matrix is not in the group generated by involutions")
    k = klein_component(m)
    c = mul(m, klein(k, m.order))
    assert is_unit_diagonal(c) and is_omega0(c)
    return c, k


# -- commutators -----------------------------------------------------------


def check_commutator_base(r: RationalLike, n: int) -> Fraction:
    r = as_rational(r)
    if r == 0:
        raise DomainError("r must be nonzero")
    for k in range(1, n + 1):
        if r**k == 1:
            raise DomainError(f"r^{k} = 1: r must not be a root of unity up to the order")
    return r


def commutator_decompose(
    m: RiordanMatrix, r: RationalLike = 2
) -> tuple[RiordanMatrix, RiordanMatrix]:
    """Return ``(A, B)`` with ``A = (1, r x)`` and ``A B A^-1 B^-1 = m``.

    ``B = (l, p)`` solves ``p(h) = p(r x)/r`` and ``d l(h) = l(r x)``
    coefficientwise, normalised by ``p_1 = 1`` and ``l_0 = 1``.
    """
    if not is_unit_diagonal(m):
        raise DomainError("commutator decomposition needs a unit diagonal (d0 = h1 = 1)")
    n = m.order
    r = check_commutator_base(r, n)
    rows = m.rows
    h = m.h
    hp = [Series.one(n)]
    for _ in range(n):
        hp.append(hp[-1] * h)
    p = [Fraction(0)] * (n + 1)
    if n >= 1:
        p[1] = Fraction(1)
    for k in range(2, n + 1):
        s = sum((hp[j][k] * p[j] for j in range(1, k)), Fraction(0))
        p[k] = s / (r ** (k - 1) - 1)
    l = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        s = sum((rows[k][j] * l[j] for j in range(k)), Fraction(0))
        l[k] = s / (r**k - 1)
    a = RiordanMatrix.diagonal(1, r, n)
    b = RiordanMatrix.from_dh(Series(l), Series(p))
    return a, b


# -- three involutions -------------------------------------------------------


def _product_row(left: Sequence[Sequence], right: Sequence[Sequence], i: int) -> list:
    li = left[i]
    out = []
    for j in range(i + 1):
        acc = Fraction(0)
        for k in range(j, i + 1):
            x = li[k]
            if isinstance(x, Fraction) and not x:
                continue
            y = right[k][j]
            if isinstance(y, Fraction) and not y:
                continue
            acc = acc + x * y
        out.append(acc)
    return out


class _TripleProduct:
    """Rows of ``F1 * F2 * F3`` for growing factors, matched against a target."""

    def __init__(self, factors: Sequence[InvolutionRows], target: Sequence[Sequence[Fraction]], system: LinSystem):
        self.factors = factors
        self.target = target
        self.system = system
        self.mid: list[list] = []  # rows of F2 * F3
        self.full: list[list] = []

    def extend(self, i: int) -> None:
        f1, f2, f3 = (f.rows for f in self.factors)
        try:
            self.mid.append(_product_row(f2, f3, i))
            self.full.append(_product_row(f1, self.mid, i))
            for j, (got, want) in enumerate(zip(self.full[i], self.target[i])):
                outcome = self.system.assert_eq(got, want)
                if outcome.status is Status.INCONSISTENT:
                    raise InternalContractError(
                        f"row {i}, column {j}: inconsistent equation (residual {outcome.residual})"
                    )
        except NonlinearProduct as exc:
            raise NonlinearProduct(f"row {i}: {exc}") from None

    def settle(self) -> None:
        values = self.system.fix()

        def fn(v):
            if isinstance(v, LinExpr):
                return v.evaluate(values)
            return v

        for f in self.factors:
            f.settle(fn)
        self.mid = [[fn(v) for v in row] for row in self.mid]
        self.full = [[fn(v) for v in row] for row in self.full]


# Tie-breaks for row 2 of the h-part: a - b + c = h_2 with a != b.
_SEED_A21 = Fraction(1)
_SEED_B21 = Fraction(0)


def _solve_h_part(m: RiordanMatrix) -> list[InvolutionRows]:
    """Involutions ``(1, w1), (1, w2), (1, w3)`` with ``w3(w2(w1)) = h``.

    Even rows carry one free unknown per factor (entry ``(m, 1)``).  They
    are solved together with the next odd row, whose entries are affine in
    them; the leftover freedom (the third factor's unknown) defaults to 0.
    """
    n = m.order
    h = m.h
    target = RiordanMatrix.from_dh(Series.one(n), h).rows
    system = LinSystem()
    facs = [InvolutionRows(1) for _ in range(3)]
    tp = _TripleProduct(facs, target, system)
    tp.extend(0)
    for f in facs:
        f.add_row(Fraction(0))
    tp.extend(1)
    for i in range(2, n + 1):
        if i == 2:
            frees = [_SEED_A21, _SEED_B21, h[2] - _SEED_A21 + _SEED_B21]
        elif i % 2 == 0:
            frees = [system.var(f"{name}[{i},1]") for name in "abc"]
        else:
            frees = [Fraction(0)] * 3
        for f, v in zip(facs, frees):
            f.add_row(v)
        tp.extend(i)
        if i % 2 == 1:
            tp.settle()
    tp.settle()
    return facs


def _solve_d_part(m: RiordanMatrix, hpart: list[InvolutionRows]) -> tuple[InvolutionRows, InvolutionRows]:
    """Involutions ``(u, w1), (v, w2)`` with ``u * v(w1) = d`` (the third factor keeps ``d = 1``).

    Odd rows carry the free entries ``(i, 0)`` of both factors and are
    solved together with the following even row.  Rows 1 and 2 are special:
    there the pair equation is quadratic until ``u_1 - v_1 = d_1`` is used,
    after which it reads ``(a - b) v_1 = 2 d_2 - d_1^2 + a d_1`` with
    ``a, b`` the ``(2,1)`` entries of the first two h-factors.
    """
    n = m.order
    d = m.d
    a_seq = [list(f.a) for f in hpart]
    if n >= 2:
        a21, b21 = hpart[0].rows[2][1], hpart[1].rows[2][1]
        v10 = (2 * d[2] - d[1] ** 2 + a21 * d[1]) / (a21 - b21)
    else:
        v10 = Fraction(0)
    u10 = d[1] + v10 if n >= 1 else Fraction(0)
    system = LinSystem()
    u = InvolutionRows(1, fixed_a=a_seq[0])
    v = InvolutionRows(1, fixed_a=a_seq[1])
    w3 = InvolutionRows(1, fixed_a=a_seq[2])
    facs = [u, v, w3]
    tp = _TripleProduct(facs, m.rows, system)
    tp.extend(0)
    if n >= 1:
        u.add_row(u10)
        v.add_row(v10)
        w3.add_row(Fraction(0))
        tp.extend(1)
    for i in range(2, n + 1):
        if i % 2 == 1:
            fu, fv = system.var(f"u[{i},0]"), system.var(f"v[{i},0]")
        else:
            fu = fv = None
        u.add_row(fu)
        v.add_row(fv)
        w3.add_row(Fraction(0) if i % 2 else None)
        tp.extend(i)
        if i % 2 == 0:
            tp.settle()
    tp.settle()
    return u, v


def factor_three(m: RiordanMatrix) -> FactorizationCertificate:
    """Three involutions ``W1 W2 W3 = m`` for ``m`` in Omega_0 with ``d0 = 1``, ``h1 = -1``.

    ``W3`` has the form ``(1, w3)``.
    """
    if m.order < 1:
        raise DomainError("factor_three needs order at least 1")
    if m.d0 != 1 or m.h1 != -1:
        raise DomainError("factor_three needs d0 = 1 and h1 = -1")
    if not is_omega0(m):
        raise DomainError("factor_three needs h2^2 = h1*h3 (Omega_0)")
    hpart = _solve_h_part(m)
    u, v = _solve_d_part(m, hpart)
    factors = (u.matrix(), v.matrix(), hpart[2].matrix())
    cert = certify(factors, m)
    if not cert.verified:
        raise InternalContractError("three-involution factorization failed verification")
    return cert


def factor_involutions(m: RiordanMatrix) -> FactorizationCertificate:
    """At most four involutions whose product is ``m``.

    Pattern ``(d0, h1) = (1, -1)`` needs at most three.  Otherwise ``m K``
    has that pattern for a suitable diagonal involution ``K`` and
    ``m = (m K) K``.
    """
    if not in_generated_by_involutions(m):
        raise NotInInvolutionGroup("matrix is not in the group generated by involutions")
    n = m.order
    if m.is_identity():
        return certify((), m)
    if is_involution(m):
        return certify((m,), m)
    k = klein_component(m)
    if k is Klein.IPLUS0:
        return factor_three(m)
    fix = k * Klein.IPLUS0
    kmat = klein(fix, n)
    three = factor_three(mul(m, kmat))
    cert = certify(three.factors + (kmat,), m)
    if not cert.verified:
        raise InternalContractError("four-involution factorization failed verification")
    return cert


# -- order-2 width ----------------------------------------------------------


def r2_involution(sign: int, p: RationalLike, q: RationalLike) -> RiordanMatrix:
    """The nontrivial order-2 involution with ``(1,0) = p`` and ``(2,1) = q``."""
    p, q = as_rational(p), as_rational(q)
    s = Fraction(sign)
    return RiordanMatrix.from_rows([[s], [p, -s], [-p * q / (2 * s), q, s]])


def _scaled(m: RiordanMatrix, c: int) -> RiordanMatrix:
    return RiordanMatrix.from_rows([[c * v for v in row] for row in m.rows])


def _solve_chain(signs: Sequence[int], x: RiordanMatrix) -> list[tuple[Fraction, Fraction]] | None:
    """Parameters ``(p_i, q_i)`` with ``prod N(s_i, p_i, q_i) = x``, or ``None`` if none exist."""
    j = len(signs)
    rows = x.rows
    if j == 0:
        return [] if x.is_identity() else None
    sigma = 1
    for s in signs:
        sigma *= s
    if x.diag() != (sigma, sigma * (-1) ** j, sigma):
        return None
    x10, x21, x20 = rows[1][0], rows[2][1], rows[2][0]
    if j == 1:
        s = signs[0]
        return [(x10, x21)] if x20 == -x10 * x21 / (2 * s) else None
    if j == 2:
        # after eliminating the second factor, (2,0) is affine in (p1, q1):
        # x20 = sigma x10 x21 / 2 - (s1 / 2)(x10 q1 + x21 p1)
        s1, s2 = signs
        rhs = sigma * x10 * x21 - 2 * x20
        if x21:
            p1, q1 = rhs / (s1 * x21), Fraction(0)
        elif x10:
            p1, q1 = Fraction(0), rhs / (s1 * x10)
        elif x20 == 0:
            p1 = q1 = Fraction(0)
        else:
            return None
        p2 = s1 * (s2 * p1 - x10)
        q2 = s1 * (x21 + s2 * q1)
        return [(p1, q1), (p2, q2)]
    # three or more factors: only the diagonal constrains; peel the last one
    for pj, qj in ((0, 0), (1, 0), (0, 1), (1, 1)):
        last = r2_involution(signs[-1], pj, qj)
        rest = _solve_chain(signs[:-1], mul(x, last))
        if rest is not None:
            return rest + [(Fraction(pj), Fraction(qj))]
    return None


def r2_width_witness(target: RiordanMatrix, k: int) -> list[RiordanMatrix] | None:
    """A list of at most ``k`` involutions of order 2 multiplying to ``target``, or ``None``.

    Every sequence of factor types (``I``, ``-I``, nontrivial with sign
    ``+`` or ``-``) of length at most ``k`` is tried; central factors fold
    into a sign and the nontrivial ones are solved exactly by
    :func:`_solve_chain`.
    """
    if target.order != 2:
        raise DomainError("the order-2 width oracle needs a matrix of order exactly 2")
    if k < 0:
        raise DomainError("k must be a natural number")
    n = 2
    for length in range(k + 1):
        for types in itertools.product(("I", "-I", "+", "-"), repeat=length):
            c = 1
            signs = []
            for t in types:
                if t == "-I":
                    c = -c
                elif t in ("+", "-"):
                    signs.append(1 if t == "+" else -1)
            params = _solve_chain(signs, _scaled(target, c))
            if params is None:
                continue
            it = iter(params)
            factors = []
            for t in types:
                if t == "I":
                    factors.append(RiordanMatrix.identity(n))
                elif t == "-I":
                    factors.append(RiordanMatrix.diagonal(-1, 1, n))
                else:
                    p, q = next(it)
                    factors.append(r2_involution(1 if t == "+" else -1, p, q))
            if certify(factors, target).verified:
                return factors
            raise InternalContractError(f"order-2 witness for {types} failed verification")
    return None


def r2_width_oracle(target: RiordanMatrix, k: int) -> bool:
    return r2_width_witness(target, k) is not None


import random
from fractions import Fraction
from itertools import product as cartesian

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gen import rand_omega0, riordan_matrices
from riordankit import riordan
from riordankit.decompose import (
    NotInInvolutionGroup, certify, commutator_decompose, factor_involutions, factor_three,
    in_generated_by_involutions, klein_component, product, r2_involution, r2_width_oracle,
    r2_width_witness, semidirect_decompose,
)
from riordankit.errors import DomainError
from riordankit.fps import Series
from riordankit.gfparse import eval_text
from riordankit.involution import Klein, is_involution, klein
from riordankit.riordan import RiordanMatrix, from_dh, pascal

WIDTH4_TARGET = [[1], [0, 1], [1, 0, 1]]
WIDTH4_FACTORS = [
    [[1], [1, -1], [-1, 2, 1]],
    [[1], [1, -1], [0, 0, 1]],
    [[1], [0, -1], [0, -2, 1]],
    [[1], [0, -1], [0, 0, 1]],
]


def E(text, n):
    return eval_text(text, n)


@st.composite
def omega0_matrices(draw, d0=1, h1=1, n_min=0, n_max=7):
    n = draw(st.integers(n_min, n_max))
    seed = draw(st.integers(0, 2**32))
    return rand_omega0(random.Random(seed), n, d0=d0, h1=h1)


# --- Klein component, membership, semidirect splitting ------------------------

def test_klein_component_examples():
    assert klein_component(pascal(4)) is Klein.I
    assert klein_component(from_dh(Series.one(4), E("-x+x^3", 4))) is Klein.IPLUS0
    with pytest.raises(DomainError):
        klein_component(from_dh(Series.constant(2, 4), Series.x(4)))


def test_membership_examples():
    assert in_generated_by_involutions(pascal(6))
    assert not in_generated_by_involutions(from_dh(Series.one(4), E("x+x^3", 4)))
    assert not in_generated_by_involutions(from_dh(Series.constant(2, 4), Series.x(4)))


def test_semidirect_examples():
    c, k = semidirect_decompose(pascal(5))
    assert c == pascal(5) and k is Klein.I
    c, k = semidirect_decompose(klein(Klein.IPLUS0, 5))
    assert c.is_identity() and k is Klein.IPLUS0
    with pytest.raises(NotInInvolutionGroup):
        semidirect_decompose(from_dh(Series.constant(2, 3), Series.x(3)))


def test_order_zero_cannot_see_h1():
    # a 1x1 matrix carries no h1, so the diagonal pattern defaults to h1 = 1
    assert klein(Klein.IPLUS0, 0) == riordan.identity(0)
    assert semidirect_decompose(klein(Klein.IMINUS0, 0))[1] is Klein.NEG_I


@given(omega0_matrices(n_min=1), st.sampled_from(list(Klein)))
def test_semidirect_recovers_pair(c, k):
    m = riordan.mul(c, klein(k, c.order))
    assert semidirect_decompose(m) == (c, k)


# --- commutators ------------------------------------------------------------

def test_commutator_pascal_example():
    n = 16
    a, b = commutator_decompose(pascal(n), 2)
    assert a == RiordanMatrix.diagonal(1, 2, n)
    assert b == pascal(n)
    lhs = product([
        from_dh(Series.one(n), E("2*x", n)),
        from_dh(E("1/(1-x)", n), E("x/(1-x)", n)),
        from_dh(Series.one(n), E("x/2", n)),
        from_dh(E("1/(1+x)", n), E("x/(1+x)", n)),
    ], n)
    assert lhs == pascal(n)


def test_commutator_examples():
    a, b = commutator_decompose(riordan.identity(6), 2)
    assert b.is_identity()
    with pytest.raises(DomainError):
        commutator_decompose(pascal(4), 1)
    with pytest.raises(DomainError):
        commutator_decompose(pascal(4), -1)
    with pytest.raises(DomainError):
        commutator_decompose(pascal(4), 0)
    with pytest.raises(DomainError):
        commutator_decompose(klein(Klein.IPLUS0, 4), 2)


@given(riordan_matrices(n_max=10, d0=st.just(Fraction(1)), h1=st.just(Fraction(1))))
@settings(max_examples=40, deadline=None)
def test_commutator_identity(m):
    for r in (2, 3, Fraction(-1, 2)):
        a, b = commutator_decompose(m, r)
        assert riordan.commutator(a, b) == m
        assert a == RiordanMatrix.diagonal(1, r, m.order)
        if m.order >= 1:
            assert b.h[1] == 1
        assert b.d[0] == 1


# --- three and four involutions ---------------------------------------------

def test_factor_three_examples():
    m = klein(Klein.IPLUS0, 5)
    cert = factor_three(m)
    assert cert.verified and cert.width == 3
    assert product(cert.factors, 5) == m and all(is_involution(f) for f in cert.factors)

    n = 8
    m = from_dh(E("1/(1+x)", n), E("-x/(1+x)", n))
    cert = factor_three(m)
    assert cert.verified
    assert product(cert.factors, n) == m
    assert cert.factors[2].d == Series.one(n)

    with pytest.raises(DomainError):
        factor_three(pascal(4))
    with pytest.raises(DomainError):
        factor_three(from_dh(Series.one(4), E("-x+x^3", 4)))


@given(omega0_matrices(d0=1, h1=-1, n_min=1, n_max=9))
@settings(max_examples=60, deadline=None)
def test_factor_three_certificate(m):
    cert = factor_three(m)
    assert cert.verified
    assert cert.width == 3
    assert product(cert.factors, m.order) == m
    assert all(is_involution(f) for f in cert.factors)
    assert cert.factors[2].d == Series.one(m.order)


@given(omega0_matrices(d0=1, h1=-1, n_min=3, n_max=9))
@settings(max_examples=40, deadline=None)
def test_factor_three_projection(m):
    """Projected factors still factor the projected target; low rows never move."""
    big = factor_three(m).factors
    small = factor_three(riordan.project(m)).factors
    assert certify([riordan.project(f) for f in big], riordan.project(m)).verified
    n = m.order - 1
    for b, s in zip(big, small):
        assert riordan.project_to(b, n - 2) == riordan.project_to(s, n - 2)


def test_factor_three_is_deterministic():
    m = rand_omega0(random.Random(7), 8, d0=1, h1=-1)
    assert factor_three(m).factors == factor_three(m).factors


def test_factor_involutions_examples():
    n = 6
    cert = factor_involutions(pascal(n))
    assert cert.verified and cert.width == 4
    assert product(cert.factors, n) == pascal(n)
    assert cert.factors[-1] == klein(Klein.IPLUS0, n)
    z = klein(Klein.IPLUS0, n)
    assert factor_involutions(z).factors == (z,)
    assert factor_involutions(riordan.identity(n)).factors == ()
    with pytest.raises(NotInInvolutionGroup):
        factor_involutions(from_dh(Series.constant(2, 3), Series.x(3)))


@given(omega0_matrices(n_max=8), st.sampled_from(list(Klein)))
@settings(max_examples=60, deadline=None)
def test_factor_involutions_width(c, k):
    m = riordan.mul(c, klein(k, c.order))
    cert = factor_involutions(m)
    assert cert.verified
    assert product(cert.factors, m.order) == m
    assert cert.width <= 4
    if k is Klein.IPLUS0:
        assert cert.width <= 3


# --- order-2 width ----------------------------------------------------------

def test_four_involution_identity():
    target = RiordanMatrix.from_rows(WIDTH4_TARGET)
    factors = [RiordanMatrix.from_rows(r) for r in WIDTH4_FACTORS]
    assert product(factors, 2) == target
    assert all(is_involution(f) for f in factors)
    assert certify(factors, target).verified


def test_r2_oracle_examples():
    target = RiordanMatrix.from_rows(WIDTH4_TARGET)
    assert r2_width_oracle(target, 3) is False
    assert r2_width_oracle(target, 4) is True
    witness = r2_width_witness(target, 4)
    assert len(witness) == 4 and product(witness, 2) == target
    assert r2_width_oracle(riordan.identity(2), 0) is True
    assert r2_width_oracle(pascal(2), 0) is False
    with pytest.raises(DomainError):
        r2_width_oracle(pascal(3), 2)


def test_r2_involution_family():
    for s, p, q in cartesian((1, -1), (0, 1, Fraction(-2, 3)), (0, 5, Fraction(1, 2))):
        assert is_involution(r2_involution(s, p, q))


def _symbolic_involution(sign, p, q):
    s = sympy.Integer(sign)
    return sympy.Matrix([[s, 0, 0], [p, -s, 0], [-p * q / (2 * s), q, s]])


def test_width_three_impossible_by_groebner():
    """Independent check: every sign pattern of three factors gives an inconsistent ideal."""
    target = sympy.Matrix([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    central = [sympy.eye(3), -sympy.eye(3)]
    syms = sympy.symbols("p1 q1 p2 q2 p3 q3")
    for length in range(4):
        for kinds in cartesian(("I", "-I", "+", "-"), repeat=length):
            mats, used = [], 0
            for kind in kinds:
                if kind in ("I", "-I"):
                    mats.append(central[kind == "-I"])
                else:
                    p, q = syms[2 * used], syms[2 * used + 1]
                    used += 1
                    mats.append(_symbolic_involution(1 if kind == "+" else -1, p, q))
            prod_ = sympy.eye(3)
            for mat in mats:
                prod_ = prod_ * mat
            eqs = [sympy.expand(e) for e in (prod_ - target) if sympy.expand(e) != 0]
            if not eqs:
                pytest.fail(f"{kinds} reproduces the target identically")
            free = [s for s in syms if any(e.has(s) for e in eqs)]
            if not free:
                assert any(e != 0 for e in eqs)
                continue
            basis = sympy.groebner(eqs, *free, order="lex")
            assert list(basis.exprs) == [1], kinds


def _random_r2_product(rng, k):
    factors = []
    for _ in range(k):
        kind = rng.choice(["I", "-I", "+", "-"])
        if kind == "I":
            factors.append(riordan.identity(2))
        elif kind == "-I":
            factors.append(RiordanMatrix.diagonal(-1, 1, 2))
        else:
            p = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
            q = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
            factors.append(r2_involution(1 if kind == "+" else -1, p, q))
    return product(factors, 2)


@pytest.mark.parametrize("seed", range(25))
def test_r2_oracle_finds_known_products(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 4)
    target = _random_r2_product(rng, k)
    witness = r2_width_witness(target, k)
    assert witness is not None and len(witness) <= k
    assert product(witness, 2) == target

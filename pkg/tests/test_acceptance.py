"""Acceptance gate: one test per criterion, each at its stated tolerance and time budget.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import random
import sys
import time
from fractions import Fraction
from itertools import product as cartesian
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import rand_matrix, rand_omega0, rand_rat, rand_series  # noqa: E402
from riordankit import riordan  # noqa: E402
from riordankit.affine import NonlinearProduct  # noqa: E402
from riordankit.decompose import (  # noqa: E402
    commutator_decompose, factor_involutions, factor_three, product, r2_width_oracle,
    semidirect_decompose,
)
from riordankit.fps import Series  # noqa: E402
from riordankit.gfparse import eval_text  # noqa: E402
from riordankit.involution import (  # noqa: E402
    InvolutionSpec, Klein, build_involution, is_involution, klein, read_spec,
)
from riordankit.riordan import RiordanMatrix, from_dh, from_fg, pascal, to_fg  # noqa: E402

TITLES = {
    1: "Pascal commutator identity at order 16",
    2: "commutator width 1 on unit-diagonal matrices",
    3: "involution construction suite",
    4: "three-involution factorization",
    5: "width at most four on the involution group",
    6: "explicit four-involution identity in order 2",
    7: "order-2 minimal width is four",
    8: "order-1 width two",
    9: "semidirect decomposition and Klein table",
    10: "action equals matrix-vector product",
    11: "(d,h) to (f,g) notation round trip",
}


def criterion(num: int, seconds: float | None = None):
    """Tag a test with its criterion number and enforce the time budget."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            fn(*args, **kwargs)
            elapsed = time.perf_counter() - start
            if seconds is not None:
                assert elapsed < seconds, f"took {elapsed:.2f}s, budget {seconds}s"

        return pytest.mark.criterion(num, TITLES[num])(run)

    return wrap


def E(text, n):
    return eval_text(text, n)


@criterion(1, seconds=1)
def test_c01_pascal_commutator():
    n = 16
    lhs = product(
        [
            from_dh(Series.one(n), E("2*x", n)),
            from_dh(E("1/(1-x)", n), E("x/(1-x)", n)),
            from_dh(Series.one(n), E("x/2", n)),
            from_dh(E("1/(1+x)", n), E("x/(1+x)", n)),
        ],
        n,
    )
    assert lhs == pascal(n)
    a, b = commutator_decompose(pascal(n), 2)
    assert b == pascal(n)
    assert riordan.commutator(a, b) == pascal(n)


@criterion(2, seconds=30)
def test_c02_commutator_width_one():
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(4, 12)
        m = rand_matrix(rng, n, d0=1, h1=1)
        r = rng.choice([2, 3])
        a, b = commutator_decompose(m, r)
        assert a == RiordanMatrix.diagonal(1, r, n)
        assert riordan.commutator(a, b) == m


@criterion(3, seconds=30)
def test_c03_involution_suite():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(4, 16)
        spec = InvolutionSpec(rng.choice([1, -1]), rand_series(rng, n))
        m = build_involution(spec, n)
        assert riordan.mul(m, m).is_identity()
        assert riordan.a_sequence(m)[2] == 0
        back = read_spec(m)
        assert back.sign == spec.sign and back.alpha == spec.alpha.truncate(n - 1)
        assert build_involution(back, n) == m
        assert riordan.project(build_involution(spec, n + 1)) == m


@criterion(4, seconds=60)
def test_c04_three_involutions():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(4, 12)
        m = rand_omega0(rng, n, d0=1, h1=-1)
        assert m.h[3] == -m.h[2] ** 2
        try:
            cert = factor_three(m)
        except NonlinearProduct as exc:  # pragma: no cover - this is the failure being guarded
            pytest.fail(f"affinity violated: {exc}")
        assert len(cert.factors) == 3
        assert all(riordan.mul(f, f).is_identity() for f in cert.factors)
        assert product(cert.factors, n) == m


@criterion(5, seconds=60)
def test_c05_width_four():
    rng = random.Random(5)
    cert = factor_involutions(pascal(10))
    assert cert.verified and len(cert.factors) == 4
    assert product(cert.factors, 10) == pascal(10)
    seen = set()
    for i in range(100):
        k = list(Klein)[i % 4]
        n = rng.randint(1, 12)
        m = riordan.mul(rand_omega0(rng, n), klein(k, n))
        cert = factor_involutions(m)
        assert len(cert.factors) <= 4
        assert all(is_involution(f) for f in cert.factors)
        assert product(cert.factors, n) == m
        if k is Klein.IPLUS0:
            assert len(cert.factors) <= 3
        seen.add(k)
    assert seen == set(Klein)


WIDTH4_TARGET = [[1], [0, 1], [1, 0, 1]]
WIDTH4_FACTORS = [
    [[1], [1, -1], [-1, 2, 1]],
    [[1], [1, -1], [0, 0, 1]],
    [[1], [0, -1], [0, -2, 1]],
    [[1], [0, -1], [0, 0, 1]],
]


@criterion(6)
def test_c06_four_factor_identity():
    factors = [RiordanMatrix.from_rows(r) for r in WIDTH4_FACTORS]
    assert product(factors, 2) == RiordanMatrix.from_rows(WIDTH4_TARGET)
    assert all(is_involution(f) for f in factors)


@criterion(7)
def test_c07_order_two_minimality():
    target = RiordanMatrix.from_rows(WIDTH4_TARGET)
    assert r2_width_oracle(target, 3) is False
    assert r2_width_oracle(target, 4) is True


# -- criterion 8: a self-contained search over order-1 involutions -------------

def _r1(sign, p):
    return RiordanMatrix.from_rows([[sign], [p, -sign]])


def _r1_involutions(rng):
    kind = rng.randrange(4)
    if kind == 0:
        return riordan.identity(1)
    if kind == 1:
        return RiordanMatrix.diagonal(-1, 1, 1)
    return _r1(1 if kind == 2 else -1, rand_rat(rng))


def _two_involution_search(t):
    """Try every pair of involution types; the free parameters enter linearly."""
    (t0,), (t10, t11) = t.rows
    centrals = [riordan.identity(1), RiordanMatrix.diagonal(-1, 1, 1)]
    for c in centrals:  # a central factor times one involution (or the empty product)
        rest = riordan.mul(c, t)
        if rest.is_identity() or is_involution(rest):
            return [c, rest]
    for s1, s2 in cartesian((1, -1), repeat=2):
        # N(s1,p1) N(s2,p2) = [[s1 s2], [s2 p1 - s1 p2, s1 s2]]
        if t0 != s1 * s2 or t11 != s1 * s2:
            continue
        p1, p2 = Fraction(t10, 1) / s2, Fraction(0)
        return [_r1(s1, p1), _r1(s2, p2)]
    return None


@criterion(8)
def test_c08_order_one_width_two():
    rng = random.Random(8)
    for _ in range(100):
        k = rng.randint(1, 5)
        t = product([_r1_involutions(rng) for _ in range(k)], 1)
        pair = _two_involution_search(t)
        assert pair is not None, t
        assert len(pair) == 2 and all(is_involution(f) for f in pair)
        assert riordan.mul(pair[0], pair[1]) == t


@criterion(9)
def test_c09_semidirect():
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randint(1, 12)
        c = rand_omega0(rng, n)
        for k in Klein:
            assert semidirect_decompose(riordan.mul(c, klein(k, n))) == (c, k)
    z2 = {Klein.I: (0, 0), Klein.NEG_I: (1, 0), Klein.IPLUS0: (0, 1), Klein.IMINUS0: (1, 1)}
    back = {v: k for k, v in z2.items()}
    for a, b in cartesian(Klein, repeat=2):
        s = back[tuple((x + y) % 2 for x, y in zip(z2[a], z2[b]))]
        assert riordan.mul(klein(a, 4), klein(b, 4)) == klein(s, 4)


@criterion(10)
def test_c10_action():
    rng = random.Random(10)
    for _ in range(100):
        n = rng.randint(0, 16)
        m = rand_matrix(rng, n)
        s = rand_series(rng, n)
        formula = m.d * s.compose(m.h)
        matvec = Series(sum((m[i, j] * s[j] for j in range(i + 1)), Fraction(0)) for i in range(n + 1))
        assert riordan.act(m, s) == formula == matvec


@criterion(11)
def test_c11_notation_bridge():
    rng = random.Random(11)
    for _ in range(100):
        m = rand_matrix(rng, rng.randint(0, 12))
        p = to_fg(m)
        assert from_fg(p) == m
        assert to_fg(from_fg(p)) == p
    p = to_fg(pascal(12))
    assert p.f == Series.one(12) and p.g == E("1-x", 12)


def _main() -> int:
    failures = 0
    tests = sorted(
        (obj.pytestmark[0].args[0], obj)
        for obj in globals().values()
        if callable(obj) and hasattr(obj, "pytestmark")
    )
    for num, fn in tests:
        start = time.perf_counter()
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # noqa: BLE001 - report every failure kind
            status = f"FAIL ({type(exc).__name__}: {exc})"
            failures += 1
        print(f"criterion {num:2d} {status} {TITLES[num]} [{time.perf_counter() - start:.2f}s]")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(_main())

"""Exact affine expressions over named unknowns and an incremental solver.

:class:`LinExpr` supports ``+ - *`` and division by constants, so code
written for plain ``Fraction`` values runs unchanged on expressions.  A
product of two non-constant expressions raises :class:`NonlinearProduct`:
callers use that as a runtime proof that their construction stays affine.

:class:`LinSystem` keeps its equations in reduced echelon form.  Each
accepted equation binds exactly one unknown (the lowest-numbered one with a
nonzero coefficient after substitution) and the binding is pushed into all
earlier bindings, so every bound unknown is always expressed in free
unknowns only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import InternalContractError

Scalar = Union[int, Fraction]


class NonlinearProduct(InternalContractError):
    pass


class LinExpr:
    __slots__ = ("constant", "terms")

    def __init__(self, constant: Scalar = 0, terms: Mapping[int, Scalar] | None = None):
        self.constant = Fraction(constant)
        self.terms: dict[int, Fraction] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = Fraction(v)

    @classmethod
    def var(cls, uid: int) -> LinExpr:
        return cls(0, {uid: 1})

    def is_constant(self) -> bool:
        return not self.terms

    def unknowns(self) -> frozenset[int]:
        return frozenset(self.terms)

    def _combine(self, other, sign: int) -> LinExpr:
        if isinstance(other, LinExpr):
            out = LinExpr(self.constant + sign * other.constant)
            terms = dict(self.terms)
            for k, v in other.terms.items():
                nv = terms.get(k, 0) + sign * v
                if nv:
                    terms[k] = nv
                else:
                    terms.pop(k, None)
            out.terms = terms
            return out
        if isinstance(other, (int, Fraction)):
            out = LinExpr(self.constant + sign * other)
            out.terms = dict(self.terms)
            return out
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self) -> LinExpr:
        return self.scale(-1)

    def scale(self, k: Scalar) -> LinExpr:
        out = LinExpr(self.constant * k)
        if k:
            out.terms = {u: c * k for u, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, LinExpr):
            if other.is_constant():
                return self.scale(other.constant)
            if self.is_constant():
                return other.scale(self.constant)
            raise NonlinearProduct(
                f"product of non-constant expressions in unknowns "
                f"{sorted(self.terms)} and {sorted(other.terms)}"
            )
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LinExpr):
            if not other.is_constant():
                raise NonlinearProduct("division by a non-constant expression")
            other = other.constant
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        return NotImplemented

    def substitute(self, values: Mapping[int, LinExpr | Scalar]) -> LinExpr:
        out = LinExpr(self.constant)
        for u, c in self.terms.items():
            if u in values:
                out = out + c * values[u]
            else:
                out = out + LinExpr(0, {u: c})
        return out

    def evaluate(self, values: Mapping[int, Scalar]) -> Fraction:
        return self.constant + sum((c * values[u] for u, c in self.terms.items()), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, LinExpr):
            return self.constant == other.constant and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return not self.terms and self.constant == other
        return NotImplemented

    def __hash__(self):
        return hash((self.constant, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        parts = [f"{c}*u{u}" for u, c in sorted(self.terms.items())]
        if self.constant or not parts:
            parts.append(str(self.constant))
        return "LinExpr(" + " + ".join(parts) + ")"


def lin_add(e1, e2):
    return e1 + e2


def lin_scale(e, k: Scalar):
    return e * k


def lin_mul(e1, e2):
    return e1 * e2


def concretize(value):
    """Collapse a constant :class:`LinExpr` to its ``Fraction``."""
    if isinstance(value, LinExpr):
        return value.constant if value.is_constant() else value
    return value


class Status(enum.Enum):
    BOUND = "bound"
    DEPENDENT = "dependent"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class Outcome:
    status: Status
    ids: tuple[int, ...] = ()
    residual: Fraction = Fraction(0)


class LinSystem:
    """Mutable builder; confine each instance to one task."""

    def __init__(self):
        self._labels: list[str] = []
        self._bindings: dict[int, LinExpr] = {}

    def new_unknown(self, label: str = "") -> int:
        self._labels.append(label or f"u{len(self._labels)}")
        return len(self._labels) - 1

    def var(self, label: str = "") -> LinExpr:
        return LinExpr.var(self.new_unknown(label))

    def label(self, uid: int) -> str:
        return self._labels[uid]

    @property
    def num_unknowns(self) -> int:
        return len(self._labels)

    def is_bound(self, uid: int) -> bool:
        return uid in self._bindings

    def binding(self, uid: int) -> LinExpr | None:
        return self._bindings.get(uid)

    def free_unknowns(self) -> list[int]:
        return [u for u in range(len(self._labels)) if u not in self._bindings]

    def reduce(self, e) -> LinExpr:
        if not isinstance(e, LinExpr):
            return LinExpr(e)
        return e.substitute(self._bindings)

    def assert_eq(self, lhs, rhs) -> Outcome:
        e = self.reduce(lhs - rhs)
        if e.is_constant():
            if e.constant == 0:
                return Outcome(Status.DEPENDENT)
            return Outcome(Status.INCONSISTENT, residual=e.constant)
        pivot = min(e.terms)
        coef = e.terms[pivot]
        rest = LinExpr(e.constant, {u: c for u, c in e.terms.items() if u != pivot})
        value = rest.scale(-1 / coef)
        for u, b in self._bindings.items():
            if pivot in b.terms:
                self._bindings[u] = b.substitute({pivot: value})
        self._bindings[pivot] = value
        return Outcome(Status.BOUND, (pivot,))

    def resolve(self, defaults: Mapping[int, Scalar] | None = None) -> dict[int, Fraction]:
        """Assign every unknown: free ones from ``defaults`` (else 0), bound ones by substitution."""
        defaults = defaults or {}
        free = {u: Fraction(defaults.get(u, 0)) for u in self.free_unknowns()}
        out = dict(free)
        for u, b in self._bindings.items():
            out[u] = b.evaluate(free)
        return out

    def fix(self, defaults: Mapping[int, Scalar] | None = None) -> dict[int, Fraction]:
        """Like :meth:`resolve`, but also commits the free choices to the system."""
        values = self.resolve(defaults)
        for u in self.free_unknowns():
            self.assert_eq(LinExpr.var(u), values[u])
        return values

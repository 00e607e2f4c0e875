"""Exact arithmetic in real quadratic fields: numbers p + q*sqrt(d) with rational p, q."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction]


def square_free_decompose(m: int) -> tuple[int, int]:
    """Write m = a**2 * b with b square-free; returns (a, b).

    Trial division up to sqrt(m); intended for desk-scale radicands.
    """
    if m < 1:
        raise ValueError(f"square_free_decompose requires m >= 1, got {m}")
    a, b = 1, 1
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            exp = 0
            while rest % p == 0:
                rest //= p
                exp += 1
            a *= p ** (exp // 2)
            if exp % 2:
                b *= p
        p += 1 if p == 2 else 2
    b *= rest
    return a, b


def is_square_free(m: int) -> bool:
    return m >= 1 and square_free_decompose(m)[0] == 1


@dataclass(frozen=True)
class QuadraticNumber:
    """Exact value p + q*sqrt(d), rational p and q, square-free integer d >= 1.

    Canonical form: d is square-free and d == 1 exactly when the value is
    rational (q folded into p for d == 1, d reset to 1 for q == 0).
    Instances are immutable and hashable; equality is exact.
    """

    p: Fraction
    q: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self) -> None:
        p = Fraction(self.p)
        q = Fraction(self.q)
        d = int(self.d)
        if d < 1:
            raise ValueError(f"radicand must be >= 1, got {d}")
        a, b = square_free_decompose(d)
        q, d = q * a, b
        if d == 1:
            p, q = p + q, Fraction(0)
        if q == 0:
            d = 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_sqrt(cls, m: int) -> "QuadraticNumber":
        """sqrt(m) in canonical form (m >= 0; sqrt(0) = 0)."""
        if m == 0:
            return cls(Fraction(0))
        return cls(Fraction(0), Fraction(1), m)

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def is_integer(self) -> bool:
        return self.d == 1 and self.p.denominator == 1

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.p, -self.q, self.d)

    def sign(self) -> int:
        """Exact sign of the value: -1, 0 or 1."""
        if self.q == 0:
            return (self.p > 0) - (self.p < 0)
        if self.p == 0:
            return 1 if self.q > 0 else -1
        if self.p > 0 and self.q > 0:
            return 1
        if self.p < 0 and self.q < 0:
            return -1
        # Opposite signs: compare p**2 against q**2 * d.
        lhs, rhs = self.p * self.p, self.q * self.q * self.d
        if lhs == rhs:
            return 0
        bigger_rational = lhs > rhs
        return (1 if bigger_rational else -1) if self.p > 0 else (-1 if bigger_rational else 1)

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def _coerce(self, other: object) -> "QuadraticNumber | None":
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(Fraction(other))
        return None

    def __add__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.d == o.d or o.is_rational:
            return QuadraticNumber(self.p + o.p, self.q + o.q, max(self.d, o.d))
        if self.is_rational:
            return QuadraticNumber(self.p + o.p, o.q, o.d)
        raise ValueError(f"incompatible radicands: sqrt({self.d}) vs sqrt({o.d})")

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.p, -self.q, self.d)

    def __sub__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_rational:
            return QuadraticNumber(self.p * o.p, self.p * o.q, o.d)
        if o.is_rational:
            return QuadraticNumber(self.p * o.p, self.q * o.p, self.d)
        if self.d == o.d:
            return QuadraticNumber(
                self.p * o.p + self.q * o.q * self.d,
                self.p * o.q + self.q * o.p,
                self.d,
            )
        raise ValueError(f"incompatible radicands: sqrt({self.d}) vs sqrt({o.d})")

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        norm = self.p * self.p - self.q * self.q * self.d
        if norm == 0:
            raise ZeroDivisionError("inverse of zero quadratic number")
        return QuadraticNumber(self.p / norm, -self.q / norm, self.d)

    def __truediv__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __lt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.d == o.d or self.is_rational or o.is_rational:
            return (self - o).sign() < 0
        # Distinct radicands: float comparison suffices at desk scale.
        return float(self) < float(other)

    def __le__(self, other: object) -> bool:
        return self == other or self < other

    def render(self) -> str:
        """Canonical text form "p + q*sqrt(d)" used in CLI/JSON output."""
        if self.q == 0:
            return str(self.p)
        surd = f"sqrt({self.d})" if abs(self.q) == 1 else f"{abs(self.q)}*sqrt({self.d})"
        if self.p == 0:
            return surd if self.q > 0 else f"-{surd}"
        op = "+" if self.q > 0 else "-"
        return f"{self.p} {op} {surd}"

    def __str__(self) -> str:
        return self.render()


def is_quadratic_integer(x: QuadraticNumber) -> bool:
    """Algebraic integer of degree <= 2.

    Rationals must be plain integers.  For irrational p + q*sqrt(d) the
    congruence class of d decides the admissible denominators: d = 2, 3
    (mod 4) needs integer p, q; d = 1 (mod 4) allows halves with 2p and 2q
    integers of equal parity.
    """
    if x.is_rational:
        return x.p.denominator == 1
    a2, b2 = 2 * x.p, 2 * x.q
    if a2.denominator != 1 or b2.denominator != 1:
        return False
    if x.d % 4 in (2, 3):
        return x.p.denominator == 1 and x.q.denominator == 1
    return (a2.numerator - b2.numerator) % 2 == 0


class PeriodicityKind(Enum):
    ALL_INTEGERS = "all_integers"
    SHARED_QUADRATIC = "shared_quadratic_form"
    NONE = "none"


@dataclass(frozen=True)
class PeriodicityForm:
    """Outcome of the shared-form test on a set of eigenvalues.

    For ALL_INTEGERS and SHARED_QUADRATIC every input value equals
    (a + b*sqrt(delta)) / 2 with the recorded integers.
    """

    kind: PeriodicityKind
    a: int = 0
    delta: int = 1
    b_values: dict[QuadraticNumber, int] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.kind is not PeriodicityKind.NONE

    def reconstruct(self, value: QuadraticNumber) -> QuadraticNumber:
        b = self.b_values[value]
        return (QuadraticNumber(Fraction(self.a)) + b * QuadraticNumber.from_sqrt(self.delta)) * Fraction(1, 2)


def classify_periodicity_form(values: Iterable[QuadraticNumber]) -> PeriodicityForm:
    """Decide whether a set of exact values is all-integer or shares one
    quadratic form (a + b*sqrt(delta))/2 with fixed integer a and square-free
    delta and per-value integers b.

    Deterministic under permutation of the input.
    """
    vals = sorted(set(values), key=float)
    if not vals:
        raise ValueError("empty value set")
    if all(v.is_integer for v in vals):
        return PeriodicityForm(
            PeriodicityKind.ALL_INTEGERS,
            a=0,
            delta=1,
            b_values={v: 2 * int(v.p) for v in vals},
        )
    irrational = [v for v in vals if not v.is_rational]
    if not irrational:
        # Non-integer rationals never arise as adjacency eigenvalues
        # (they are algebraic integers), so no shared form is assigned.
        return PeriodicityForm(PeriodicityKind.NONE)
    deltas = {v.d for v in irrational}
    if len(deltas) > 1:
        return PeriodicityForm(PeriodicityKind.NONE)
    delta = deltas.pop()
    a_candidates = {2 * v.p for v in irrational}
    if len(a_candidates) > 1:
        return PeriodicityForm(PeriodicityKind.NONE)
    a2 = a_candidates.pop()
    if a2.denominator != 1:
        return PeriodicityForm(PeriodicityKind.NONE)
    a = a2.numerator
    b_values: dict[QuadraticNumber, int] = {}
    for v in vals:
        if v.is_rational:
            # sqrt(delta) is irrational here, so only b = 0 can work.
            if 2 * v.p != a:
                return PeriodicityForm(PeriodicityKind.NONE)
            b_values[v] = 0
        else:
            b2 = 2 * v.q
            if b2.denominator != 1:
                return PeriodicityForm(PeriodicityKind.NONE)
            b_values[v] = b2.numerator
    return PeriodicityForm(PeriodicityKind.SHARED_QUADRATIC, a=a, delta=delta, b_values=b_values)

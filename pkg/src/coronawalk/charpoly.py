"""Exact spectra of integer symmetric matrices.

Characteristic polynomials are computed in arbitrary-precision integer
arithmetic; eigenvalues are recognised as integers or quadratic surds by
exact polynomial division, so every recognised value is certain and any
leftover factor is a proof that its roots have degree >= 3 over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .quadratics import QuadraticNumber, square_free_decompose

# Polynomials are coefficient lists in ascending order; all charpolys are monic.


def char_poly(adjacency: np.ndarray) -> list[int]:
    """Monic characteristic polynomial det(xI - A) with exact integer coefficients
    (Faddeev-LeVerrier recurrence on Python ints)."""
    a = [[int(x) for x in row] for row in np.asarray(adjacency)]
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise ValueError("adjacency must be a non-empty square matrix")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # M_1 = I
    for k in range(1, n + 1):
        am = [
            [sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        trace = sum(am[i][i] for i in range(n))
        if trace % k != 0:
            raise ArithmeticError("Faddeev-LeVerrier trace not divisible; non-integer input?")
        c = -trace // k
        coeffs[n - k] = c
        if k < n:
            m = [
                [am[i][j] + (c if i == j else 0) for j in range(n)]
                for i in range(n)
            ]
    return coeffs


def poly_eval_int(p: list[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_quad(p: list[int], x: QuadraticNumber) -> QuadraticNumber:
    acc = QuadraticNumber(Fraction(0))
    for c in reversed(p):
        acc = acc * x + QuadraticNumber(Fraction(c))
    return acc


def _poly_derivative(p: list[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(p)][1:] or [Fraction(0)]


def _poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    dd = len(den) - 1
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
        dd -= 1
    if dd < 0 or all(c == 0 for c in den):
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(1, len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        f = num[i] / den[-1]
        quot[i - dd] = f
        for j in range(dd + 1):
            num[i - dd + j] -= f * den[j]
    rem = num[:dd] or [Fraction(0)]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while any(c != 0 for c in b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    # Normalise monic.
    lead = a[-1]
    return [c / lead for c in a]


def square_free_part(p: list[int]) -> list[int]:
    """p / gcd(p, p'): same distinct roots, each simple. Integer monic output."""
    pf = [Fraction(c) for c in p]
    g = _poly_gcd(pf, _poly_derivative(pf))
    if len(g) == 1:
        return list(p)
    q, r = _poly_divmod(pf, g)
    if any(c != 0 for c in r):
        raise ArithmeticError("square-free division left a remainder")
    out = []
    for c in q:
        if c.denominator != 1:
            raise ArithmeticError("square-free part not integral")
        out.append(c.numerator)
    return out


def _divide_out_linear(p: list[int], r: int) -> list[int] | None:
    """Synthetic division by (x - r); None if the remainder is non-zero."""
    quot = [0] * (len(p) - 1)
    acc = 0
    for i in range(len(p) - 1, 0, -1):
        acc = acc * r + p[i]
        quot[i - 1] = acc
    if acc * r + p[0] != 0:
        return None
    return quot


def _divide_out_quadratic(p: list[int], s: int, c: int) -> list[int] | None:
    """Exact division by x**2 - s*x + c; None on non-zero remainder."""
    if len(p) < 3:
        return None
    num = [Fraction(x) for x in p]
    quot, rem = _poly_divmod(num, [Fraction(c), Fraction(-s), Fraction(1)])
    if any(x != 0 for x in rem):
        return None
    if any(x.denominator != 1 for x in quot):
        return None
    return [x.numerator for x in quot]


@dataclass(frozen=True)
class ExactSpectrum:
    """Recognised exact eigenvalues (descending) with multiplicities, plus any
    numeric values whose minimal polynomial provably has degree >= 3."""

    entries: tuple[tuple[QuadraticNumber, int], ...]
    unresolved: tuple[float, ...]

    @property
    def fully_quadratic(self) -> bool:
        return not self.unresolved

    @property
    def all_integer(self) -> bool:
        return self.fully_quadratic and all(v.is_integer for v, _ in self.entries)

    def multiplicity_total(self) -> int:
        return sum(m for _, m in self.entries)

    def match(self, value: float, tol: float = 1e-6) -> QuadraticNumber | None:
        for v, _ in self.entries:
            if abs(float(v) - value) <= tol:
                return v
        return None


def exact_spectrum(adjacency: np.ndarray) -> ExactSpectrum:
    """Recognise the full spectrum as integers / quadratic surds where possible.

    Extraction is certified by exact polynomial division; numeric eigenvalues
    only steer the search for quadratic factors.
    """
    a = np.asarray(adjacency)
    n = a.shape[0]
    p = char_poly(a)
    p_sf = square_free_part(p)

    entries: list[tuple[QuadraticNumber, int]] = []
    remaining = list(p_sf)
    work = list(p)

    # Integer roots: adjacency eigenvalues are bounded by the max degree < n.
    for r in range(-n, n + 1):
        if len(remaining) <= 1:
            break
        quot = _divide_out_linear(remaining, r)
        if quot is None:
            continue
        remaining = quot
        mult = 0
        while True:
            q2 = _divide_out_linear(work, r)
            if q2 is None:
                break
            work = q2
            mult += 1
        entries.append((QuadraticNumber(Fraction(r)), mult))

    # Quadratic factors: candidate (sum, product) pairs come from the numeric
    # spectrum, the division check makes acceptance exact.
    numeric = np.linalg.eigvalsh(a.astype(float))
    cands = _distinct(numeric, entries)
    changed = True
    while len(remaining) > 2 and changed:
        changed = False
        for i in range(len(cands)):
            for j in range(i + 1, len(cands)):
                s = round(cands[i] + cands[j])
                c = round(cands[i] * cands[j])
                quot = _divide_out_quadratic(remaining, s, c)
                if quot is None:
                    continue
                disc = s * s - 4 * c
                if disc <= 0:
                    continue
                a0, b0 = square_free_decompose(disc)
                if b0 == 1:
                    continue  # would have split into the integer roots above
                root_plus = QuadraticNumber(Fraction(s, 2), Fraction(a0, 2), b0)
                remaining = quot
                mult = 0
                while True:
                    q2 = _divide_out_quadratic(work, s, c)
                    if q2 is None:
                        break
                    work = q2
                    mult += 1
                entries.append((root_plus, mult))
                entries.append((root_plus.conjugate(), mult))
                del cands[j], cands[i]
                changed = True
                break
            if changed:
                break

    entries.sort(key=lambda e: -float(e[0]))
    recognised = sum(m for _, m in entries)
    unresolved: tuple[float, ...] = ()
    if recognised != n:
        budget = {float(v): m for v, m in entries}
        leftover = []
        for x in sorted(numeric):
            key = next((f for f in budget if abs(f - x) <= 1e-6 and budget[f] > 0), None)
            if key is None:
                leftover.append(float(x))
            else:
                budget[key] -= 1
        unresolved = tuple(leftover)
        if len(unresolved) != n - recognised:
            raise ArithmeticError("exact/numeric multiplicity mismatch")
    return ExactSpectrum(entries=tuple(entries), unresolved=unresolved)


def _is_root_among(x: float, entries: list[tuple[QuadraticNumber, int]]) -> bool:
    return any(abs(float(v) - x) <= 1e-6 for v, _ in entries)


def _distinct(numeric: np.ndarray, entries: list[tuple[QuadraticNumber, int]], tol: float = 1e-6) -> list[float]:
    """Distinct numeric eigenvalues not already recognised."""
    out: list[float] = []
    for x in sorted(float(v) for v in numeric):
        if _is_root_among(x, entries):
            continue
        if out and abs(out[-1] - x) <= tol:
            continue
        out.append(x)
    return out


QuadMatrix = list[list[QuadraticNumber]]


def exact_eigenprojector(adjacency: np.ndarray, spectrum: ExactSpectrum, value: QuadraticNumber) -> QuadMatrix:
    """Eigenprojector of `value` by Lagrange interpolation over the distinct
    spectrum, grouped so all intermediate matrices stay rational.

    Requires `value` itself rational or quadratic; other eigenvalues may sit in
    an unresolved factor (it enters the product with integer coefficients).
    """
    a = np.asarray(adjacency)
    n = a.shape[0]
    if not any(v == value for v, _ in spectrum.entries):
        raise ValueError(f"{value} is not a recognised eigenvalue")

    # Distinct factors of the square-free kernel: linear for rational roots,
    # quadratic for surd pairs (listed once), leftover polynomial if any.
    factors: list[tuple[list[int], object]] = []  # (coeffs, roots marker)
    seen: set[QuadraticNumber] = set()
    for v, _ in spectrum.entries:
        if v in seen:
            continue
        if v.is_rational:
            r = int(v.p)
            factors.append(([-r, 1], (v,)))
            seen.add(v)
        else:
            s2, prod = 2 * v.p, v.p * v.p - v.q * v.q * v.d
            factors.append(([int(prod), -int(s2), 1], (v, v.conjugate())))
            seen.add(v)
            seen.add(v.conjugate())
    leftover = _leftover_factor(a, spectrum)
    if leftover is not None:
        factors.append((leftover, ()))

    a_int = [[int(x) for x in row] for row in a]
    num = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    den = QuadraticNumber(Fraction(1))
    own_conjugate: QuadraticNumber | None = None
    for coeffs, roots in factors:
        if value in roots:
            if len(roots) == 2:
                own_conjugate = roots[0] if roots[1] == value else roots[1]
            continue
        num = _frac_mat_mul_poly(num, a_int, coeffs)
        den = den * poly_eval_quad(coeffs, value)
    if own_conjugate is not None:
        den = den * (value - own_conjugate)
        return _frac_mat_times_a_minus(num, a_int, own_conjugate, den)
    inv = den.inverse()
    return [[QuadraticNumber(num[i][j]) * inv for j in range(n)] for i in range(n)]


def _leftover_factor(a: np.ndarray, spectrum: ExactSpectrum) -> list[int] | None:
    if spectrum.fully_quadratic:
        return None
    p_sf = square_free_part(char_poly(a))
    remaining = list(p_sf)
    for v, _ in spectrum.entries:
        if v.is_rational:
            quot = _divide_out_linear(remaining, int(v.p))
            if quot is not None:
                remaining = quot
        elif v.q > 0:
            s2, prod = 2 * v.p, v.p * v.p - v.q * v.q * v.d
            quot = _divide_out_quadratic(remaining, int(s2), int(prod))
            if quot is not None:
                remaining = quot
    return remaining if len(remaining) > 1 else None


def _frac_mat_mul_poly(m: list[list[Fraction]], a_int: list[list[int]], coeffs: list[int]) -> list[list[Fraction]]:
    """m @ poly(A) evaluated with Horner on exact matrices."""
    n = len(a_int)
    acc = [[m[i][j] * coeffs[-1] for j in range(n)] for i in range(n)]
    for c in reversed(coeffs[:-1]):
        nxt = [
            [sum(acc[i][t] * a_int[t][j] for t in range(n)) + m[i][j] * c for j in range(n)]
            for i in range(n)
        ]
        acc = nxt
    return acc


def _frac_mat_times_a_minus(num: list[list[Fraction]], a_int: list[list[int]], shift: QuadraticNumber, den: QuadraticNumber) -> QuadMatrix:
    """num @ (A - shift*I) / den with a single exit into quadratic entries."""
    n = len(a_int)
    inv = den.inverse()
    na = [
        [sum(num[i][t] * a_int[t][j] for t in range(n)) for j in range(n)]
        for i in range(n)
    ]
    out: QuadMatrix = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = QuadraticNumber(na[i][j]) - shift * QuadraticNumber(num[i][j])
            row.append(entry * inv)
        out.append(row)
    return out


def projector_column(matrix: QuadMatrix, v: int) -> list[QuadraticNumber]:
    return [row[v] for row in matrix]


def column_is_zero(column: list[QuadraticNumber]) -> bool:
    zero = QuadraticNumber(Fraction(0))
    return all(x == zero for x in column)

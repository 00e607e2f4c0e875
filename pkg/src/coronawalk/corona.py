"""Closed-form spectral data for neighborhood coronas: eigenvalues, block
eigenprojectors (generic and zero-eigenvalue branches) and apex-to-apex
transition amplitudes, exact when both factors have integer spectra."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .charpoly import ExactSpectrum, QuadMatrix, exact_eigenprojector, exact_spectrum
from .graphs import Graph, regularity_degree
from .quadratics import QuadraticNumber, square_free_decompose
from .spectral import (
    DEFAULT_CLUSTER_TOL,
    SpectralDecomposition,
    SpectralEntry,
    eigendecompose,
)

Eigenvalue = Union[QuadraticNumber, float]

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class DeltaLambda:
    """sqrt((lam - k)**2 + 4 n2 lam**2), the branch gap of eigenvalue lam."""

    lam: Eigenvalue
    value: float
    exact: QuadraticNumber | None


def delta_lambda(lam: Eigenvalue, k: int, n2: int) -> DeltaLambda:
    if n2 < 1:
        raise ValueError("n2 must be >= 1")
    if isinstance(lam, QuadraticNumber) and lam.is_integer:
        li = int(lam.p)
        m = (li - k) ** 2 + 4 * n2 * li * li
        exact = QuadraticNumber.from_sqrt(m)
        return DeltaLambda(lam=lam, value=float(exact), exact=exact)
    lf = float(lam)
    return DeltaLambda(lam=lam, value=math.sqrt((lf - k) ** 2 + 4 * n2 * lf * lf), exact=None)


@dataclass(frozen=True)
class CoronaEigenvalue:
    """One eigenvalue of the corona with its provenance.

    origin: "plus"/"minus" for the two branches of a non-zero first-factor
    eigenvalue, "zero_plus"/"zero_minus" for the degenerate branches of a zero
    eigenvalue (values k and 0), "copy" for second-factor eigenvalues carried
    by the copies.
    """

    origin: str
    base: Eigenvalue
    value: Eigenvalue
    multiplicity: int

    @property
    def value_float(self) -> float:
        return float(self.value)

    def to_dict(self) -> dict:
        value = self.value.render() if isinstance(self.value, QuadraticNumber) else repr(float(self.value))
        return {"origin": self.origin, "value": value, "multiplicity": self.multiplicity}


def _is_zero(value: Eigenvalue, scale: float) -> bool:
    if isinstance(value, QuadraticNumber):
        return value.sign() == 0
    return abs(value) <= ZERO_TOL * max(1.0, scale)


def corona_eigenvalues(
    sp1: Sequence[tuple[Eigenvalue, int]],
    sp2: Sequence[tuple[Eigenvalue, int]],
    k: int,
    n2: int,
) -> list[CoronaEigenvalue]:
    """Eigenvalues of the corona from the factor spectra.

    Each non-zero first-factor eigenvalue lam contributes the two branches
    (lam + k +- sqrt((lam-k)**2 + 4 n2 lam**2))/2 with its multiplicity; a zero
    eigenvalue contributes the degenerate values k and 0.  Second-factor
    eigenvalues are carried once per copy, except that one k-eigenvector per
    copy (the all-ones direction) is consumed by the construction.
    """
    if k < 0 or n2 < 1:
        raise ValueError("need k >= 0 and n2 >= 1")
    n1 = sum(m for _, m in sp1)
    if n1 < 1 or any(m < 1 for _, m in sp1):
        raise ValueError("bad multiplicities in first-factor spectrum")
    if sum(m for _, m in sp2) != n2:
        raise ValueError("second-factor multiplicities must sum to n2")
    scale = max([1.0] + [abs(float(v)) for v, _ in sp1] + [float(k)])
    k_mult = 0
    for eta, m in sp2:
        if _matches_int(eta, k):
            k_mult += m
    if k_mult < 1:
        raise ValueError("second factor is not k-regular: k missing from its spectrum")

    out: list[CoronaEigenvalue] = []
    for lam, mult in sp1:
        if _is_zero(lam, scale):
            zero = QuadraticNumber(Fraction(0)) if isinstance(lam, QuadraticNumber) else 0.0
            kv = QuadraticNumber(Fraction(k)) if isinstance(lam, QuadraticNumber) else float(k)
            out.append(CoronaEigenvalue("zero_plus", lam, kv, mult))
            out.append(CoronaEigenvalue("zero_minus", lam, zero, mult))
            continue
        plus, minus = branch_values(lam, k, n2)
        out.append(CoronaEigenvalue("plus", lam, plus, mult))
        out.append(CoronaEigenvalue("minus", lam, minus, mult))
    for eta, mult in sp2:
        carried = n1 * (mult - 1) if _matches_int(eta, k) else n1 * mult
        if carried > 0:
            out.append(CoronaEigenvalue("copy", eta, eta, carried))
    total = sum(e.multiplicity for e in out)
    if total != n1 * (1 + n2):
        raise ArithmeticError(f"corona multiplicities sum to {total}, expected {n1 * (1 + n2)}")
    out.sort(key=lambda e: -e.value_float)
    return out


def branch_values(lam: Eigenvalue, k: int, n2: int) -> tuple[Eigenvalue, Eigenvalue]:
    """The two corona branches of a non-zero first-factor eigenvalue."""
    if isinstance(lam, QuadraticNumber) and lam.is_integer:
        li = int(lam.p)
        m = (li - k) ** 2 + 4 * n2 * li * li
        a, b = square_free_decompose(m)
        plus = QuadraticNumber(Fraction(li + k, 2), Fraction(a, 2), b)
        minus = QuadraticNumber(Fraction(li + k, 2), Fraction(-a, 2), b)
        return plus, minus
    lf = float(lam)
    gap = math.sqrt((lf - k) ** 2 + 4 * n2 * lf * lf)
    return (lf + k + gap) / 2, (lf + k - gap) / 2


def _matches_int(value: Eigenvalue, k: int) -> bool:
    if isinstance(value, QuadraticNumber):
        return value == QuadraticNumber(Fraction(k))
    return abs(float(value) - k) <= 1e-7 * max(1.0, abs(k))


@dataclass(frozen=True)
class CoronaEntry:
    """Merged corona eigenvalue: distinct value, total multiplicity, full
    eigenprojector, and the per-origin constituents it absorbed."""

    value: float
    exact: QuadraticNumber | None
    multiplicity: int
    projector: np.ndarray
    origins: tuple[CoronaEigenvalue, ...]


@dataclass(frozen=True)
class CoronaDecomposition:
    entries: tuple[CoronaEntry, ...]
    n1: int
    n2: int
    k: int

    @property
    def n(self) -> int:
        return self.n1 * (1 + self.n2)

    def to_spectral(self) -> SpectralDecomposition:
        return SpectralDecomposition(
            entries=tuple(
                SpectralEntry(value=e.value, multiplicity=e.multiplicity, projector=e.projector)
                for e in self.entries
            ),
            source="closed-form",
        )

    def eigenvalue_dicts(self) -> list[dict]:
        return [ev.to_dict() for e in self.entries for ev in e.origins]


def corona_decomposition(
    d1: SpectralDecomposition,
    d2: SpectralDecomposition,
    k: int,
    *,
    exact1: ExactSpectrum | None = None,
    exact2: ExactSpectrum | None = None,
    merge_tol: float = DEFAULT_CLUSTER_TOL,
) -> CoronaDecomposition:
    """Assemble the block eigenprojectors of the corona from factor
    decompositions (second factor k-regular).

    Both the generic branch and the zero-eigenvalue branch are built; raw
    projectors whose eigenvalues coincide (e.g. the k = 0 degenerate family)
    are merged into one entry so the projector laws hold entry-wise.
    """
    n1, n2 = d1.n, d2.n
    if abs(d2.entries[0].value - k) > 1e-7 * max(1.0, k):
        raise ValueError("second factor decomposition is inconsistent with degree k")
    scale = max(1.0, float(np.abs(d1.values).max()), float(k))
    ones_row = np.ones((1, n2))
    j2 = np.ones((n2, n2))
    eye1 = np.eye(n1)
    raw: list[tuple[float, QuadraticNumber | None, CoronaEigenvalue, np.ndarray]] = []

    def exact_of(spec: ExactSpectrum | None, value: float) -> QuadraticNumber | None:
        return spec.match(value) if spec is not None else None

    for entry in d1.entries:
        lam, f1, mult = entry.value, entry.projector, entry.multiplicity
        lam_exact = exact_of(exact1, lam)
        exact_mode = lam_exact is not None and lam_exact.is_integer
        base: Eigenvalue = lam_exact if lam_exact is not None else lam
        if (lam_exact.sign() == 0) if exact_mode else (abs(lam) <= ZERO_TOL * scale):
            top = np.zeros((n1, n1 * n2))
            proj_zero = np.block([[f1, top], [top.T, np.zeros((n1 * n2, n1 * n2))]])
            kv_exact = QuadraticNumber(Fraction(k)) if exact_mode else None
            zero_exact = QuadraticNumber(Fraction(0)) if exact_mode else None
            raw.append((0.0, zero_exact, CoronaEigenvalue("zero_minus", base, zero_exact if exact_mode else 0.0, mult), proj_zero))
            proj_k = np.block([
                [np.zeros((n1, n1)), top],
                [top.T, np.kron(f1, j2) / n2],
            ])
            raw.append((float(k), kv_exact, CoronaEigenvalue("zero_plus", base, kv_exact if exact_mode else float(k), mult), proj_k))
            continue
        if exact_mode:
            plus_e, minus_e = branch_values(lam_exact, k, n2)
            branches = [("plus", float(plus_e), plus_e), ("minus", float(minus_e), minus_e)]
        else:
            plus_f, minus_f = branch_values(lam, k, n2)
            branches = [("plus", plus_f, None), ("minus", minus_f, None)]
        for origin, bval, bexact in branches:
            c = bval - k
            denom = c * c + n2 * lam * lam
            tl = (c * c / denom) * f1
            tr = (c * lam / denom) * np.kron(f1, ones_row)
            br = (lam * lam / denom) * np.kron(f1, j2)
            proj = np.block([[tl, tr], [tr.T, br]])
            raw.append((bval, bexact, CoronaEigenvalue(origin, base, bexact if bexact is not None else bval, mult), proj))

    for entry in d2.entries:
        eta, f2, mult = entry.value, entry.projector, entry.multiplicity
        eta_exact = exact_of(exact2, eta)
        base = eta_exact if eta_exact is not None else eta
        is_k = abs(eta - k) <= 1e-7 * max(1.0, k)
        if is_k:
            carried = n1 * (mult - 1)
            if carried == 0:
                continue
            block = f2 - j2 / n2
        else:
            carried = n1 * mult
            block = f2
        top = np.zeros((n1, n1 * n2))
        proj = np.block([[np.zeros((n1, n1)), top], [top.T, np.kron(eye1, block)]])
        value = float(k) if is_k else eta
        raw.append((value, eta_exact, CoronaEigenvalue("copy", base, base if eta_exact is not None else eta, carried), proj))

    # Merge raw entries whose eigenvalues coincide.
    raw.sort(key=lambda item: -item[0])
    merged: list[CoronaEntry] = []
    threshold = merge_tol * max(1.0, max(abs(item[0]) for item in raw))
    group: list[tuple[float, QuadraticNumber | None, CoronaEigenvalue, np.ndarray]] = []

    def flush() -> None:
        if not group:
            return
        exacts = {e for _, e, _, _ in group if e is not None}
        if len(exacts) > 1:
            raise ArithmeticError("merged corona entries disagree on exact value")
        exact = exacts.pop() if exacts else None
        proj = sum(p for _, _, _, p in group)
        proj = (proj + proj.T) / 2
        proj.setflags(write=False)
        value = float(exact) if exact is not None else group[0][0]
        merged.append(
            CoronaEntry(
                value=value,
                exact=exact,
                multiplicity=sum(ev.multiplicity for _, _, ev, _ in group),
                projector=proj,
                origins=tuple(ev for _, _, ev, _ in group),
            )
        )
        group.clear()

    for item in raw:
        if group and abs(group[-1][0] - item[0]) > threshold:
            flush()
        group.append(item)
    flush()

    total = sum(e.multiplicity for e in merged)
    if total != n1 * (1 + n2):
        raise ArithmeticError(f"corona multiplicities sum to {total}, expected {n1 * (1 + n2)}")
    return CoronaDecomposition(entries=tuple(merged), n1=n1, n2=n2, k=k)


def corona_closed_form(
    g1: Graph,
    g2: Graph,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> CoronaDecomposition:
    """Closed-form decomposition straight from the two factor graphs."""
    k = regularity_degree(g2)
    if k is None:
        raise ValueError("second factor must be regular")
    d1 = eigendecompose(g1, cluster_tol)
    d2 = eigendecompose(g2, cluster_tol)
    return corona_decomposition(
        d1, d2, k,
        exact1=exact_spectrum(g1.adjacency),
        exact2=exact_spectrum(g2.adjacency),
    )


def apex_amplitude(
    d1: SpectralDecomposition,
    k: int,
    n2: int,
    u: int,
    v: int,
    t: float,
    exact1: ExactSpectrum | None = None,
) -> complex:
    """e_(u,0)^T exp(-itA(corona)) e_(v,0) from first-factor data alone.

    Each non-zero eigenvalue lam contributes its projector weight modulated by
    exp(-it(lam+k)/2) (cos(gap t/2) + i (k-lam)/gap sin(gap t/2)); a zero
    eigenvalue contributes its bare projector weight.  When the exact spectrum
    is supplied, eigenvalues snap to it: at the long witness times the branch
    gaps amplify eigensolver noise well above phase accuracy otherwise.
    """
    if n2 < 1:
        raise ValueError("n2 must be >= 1")
    scale = max(1.0, float(np.abs(d1.values).max()))
    two_pi = 2 * np.longdouble(np.pi)
    t_hp = np.longdouble(t)
    amp = 0j
    for entry in d1.entries:
        lam_hp = entry.hp
        if exact1 is not None:
            snapped = exact1.match(entry.value)
            if snapped is not None:
                lam_hp = _to_longdouble(snapped)
        w = entry.projector[u, v]
        if abs(float(lam_hp)) <= ZERO_TOL * scale:
            amp += w
            continue
        gap_hp = np.sqrt((lam_hp - k) ** 2 + 4 * n2 * lam_hp * lam_hp)
        if gap_hp == 0.0:
            raise ArithmeticError("zero branch gap for a non-zero eigenvalue")
        theta1 = float(np.mod(t_hp * (lam_hp + k) / 2, two_pi))
        theta2 = float(np.mod(gap_hp * t_hp / 2, two_pi))
        slope = float((k - lam_hp) / gap_hp)
        amp += cmath.exp(-1j * theta1) * w * (math.cos(theta2) + 1j * slope * math.sin(theta2))
    return amp


def _to_longdouble(x: QuadraticNumber) -> np.longdouble:
    p = np.longdouble(x.p.numerator) / np.longdouble(x.p.denominator)
    q = np.longdouble(x.q.numerator) / np.longdouble(x.q.denominator)
    return p + q * np.sqrt(np.longdouble(x.d))


def apex_support_exact(
    supp1: set[QuadraticNumber],
    k: int,
    n2: int,
) -> set[QuadraticNumber]:
    """Exact corona support of an apex vertex (v, 0) from the exact first-factor
    support of v: both branches of each non-zero value, plus 0 when present."""
    out: set[QuadraticNumber] = set()
    for lam in supp1:
        if not lam.is_integer:
            raise ValueError("exact apex supports need an integer first-factor support")
        if lam.sign() == 0:
            out.add(QuadraticNumber(Fraction(0)))
            continue
        plus, minus = branch_values(lam, k, n2)
        out.add(plus)
        out.add(minus)
    return out


def corona_projectors_exact(g1: Graph, g2: Graph) -> list[tuple[QuadraticNumber, QuadMatrix]]:
    """Exact (quadratic-field) corona eigenprojectors for integer-spectrum
    factors; entries with equal eigenvalues are merged.

    Intended for identity verification at desk scale: the returned projectors
    sum exactly to the identity.
    """
    k = regularity_degree(g2)
    if k is None:
        raise ValueError("second factor must be regular")
    spec1 = exact_spectrum(g1.adjacency)
    spec2 = exact_spectrum(g2.adjacency)
    if not (spec1.all_integer and spec2.all_integer):
        raise ValueError("exact corona projectors need integer factor spectra")
    n1, n2 = g1.n, g2.n
    n = n1 * (1 + n2)
    zero = QuadraticNumber(Fraction(0))
    one = QuadraticNumber(Fraction(1))

    def qzeros() -> QuadMatrix:
        return [[zero for _ in range(n)] for _ in range(n)]

    entries: dict[QuadraticNumber, QuadMatrix] = {}

    def add(value: QuadraticNumber, proj: QuadMatrix) -> None:
        if value in entries:
            old = entries[value]
            entries[value] = [[old[i][j] + proj[i][j] for j in range(n)] for i in range(n)]
        else:
            entries[value] = proj

    kq = QuadraticNumber(Fraction(k))
    n2q = QuadraticNumber(Fraction(n2))
    inv_n2 = QuadraticNumber(Fraction(1, n2))

    for lam, _ in spec1.entries:
        f1 = exact_eigenprojector(g1.adjacency, spec1, lam)
        if lam.sign() == 0:
            proj = qzeros()
            for x in range(n1):
                for x2 in range(n1):
                    proj[x][x2] = f1[x][x2]
            add(zero, proj)
            proj_k = qzeros()
            for x in range(n1):
                for x2 in range(n1):
                    w = f1[x][x2] * inv_n2
                    for y in range(n2):
                        for y2 in range(n2):
                            proj_k[n1 + x * n2 + y][n1 + x2 * n2 + y2] = w
            add(kq, proj_k)
            continue
        for value in branch_values(lam, k, n2):
            c = value - kq
            denom = (c * c + n2q * lam * lam).inverse()
            w_tl = c * c * denom
            w_tr = c * lam * denom
            w_br = lam * lam * denom
            proj = qzeros()
            for x in range(n1):
                for x2 in range(n1):
                    f = f1[x][x2]
                    if f == zero:
                        continue
                    proj[x][x2] = w_tl * f
                    cross = w_tr * f
                    block = w_br * f
                    for y in range(n2):
                        proj[x][n1 + x2 * n2 + y] = cross
                        proj[n1 + x2 * n2 + y][x] = cross
                        for y2 in range(n2):
                            proj[n1 + x * n2 + y][n1 + x2 * n2 + y2] = block
            add(value, proj)

    for eta, mult in spec2.entries:
        f2 = exact_eigenprojector(g2.adjacency, spec2, eta)
        is_k = eta == kq
        if is_k and mult == 1:
            continue
        proj = qzeros()
        for x in range(n1):
            for y in range(n2):
                for y2 in range(n2):
                    val = f2[y][y2]
                    if is_k:
                        val = val - inv_n2
                    proj[n1 + x * n2 + y][n1 + x * n2 + y2] = val
        add(kq if is_k else eta, proj)

    ordered = sorted(entries.items(), key=lambda kv: -float(kv[0]))
    return ordered


def sum_exact_projectors(entries: list[tuple[QuadraticNumber, QuadMatrix]]) -> QuadMatrix:
    """Exact sum of projectors, grouped by radicand so that conjugate branches
    cancel to rational matrices before cross-field addition."""
    if not entries:
        raise ValueError("no projectors to sum")
    n = len(entries[0][1])
    zero = QuadraticNumber(Fraction(0))
    total = [[zero for _ in range(n)] for _ in range(n)]
    by_d: dict[int, list[QuadMatrix]] = {}
    for value, proj in entries:
        by_d.setdefault(value.d, []).append(proj)
    for mats in by_d.values():
        partial = [[zero for _ in range(n)] for _ in range(n)]
        for proj in mats:
            for i in range(n):
                row_p, row_out = proj[i], partial[i]
                for j in range(n):
                    row_out[j] = row_out[j] + row_p[j]
        for i in range(n):
            row_p, row_t = partial[i], total[i]
            for j in range(n):
                row_t[j] = row_t[j] + row_p[j]
    return total

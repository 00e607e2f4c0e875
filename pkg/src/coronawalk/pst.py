"""Periodicity decisions, perfect-state-transfer certification, and the
no-transfer predicates for neighborhood coronas."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .charpoly import (
    ExactSpectrum,
    column_is_zero,
    exact_eigenprojector,
    exact_spectrum,
    projector_column,
)
from .corona import CoronaDecomposition, apex_support_exact
from .graphs import Graph, regularity_degree
from .quadratics import (
    PeriodicityKind,
    QuadraticNumber,
    classify_periodicity_form,
    is_quadratic_integer,
    square_free_decompose,
)
from .spectral import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_SUPPORT_TOL,
    SpectralDecomposition,
    eigendecompose,
    support_entry_indices,
    transition_amplitude,
)

NOT_STRONGLY_COSPECTRAL = "not_strongly_cospectral"
SUPPORT_NOT_QUADRATIC = "support_not_quadratic"
PARITY_VIOLATION = "parity_violation"

PST_FIDELITY_TOL = 1e-9


@dataclass(frozen=True)
class PSTCertificate:
    """Outcome of the transfer test between two distinct vertices.

    A positive verdict carries the square-free radicand delta, the gcd g of the
    scaled support gaps, the minimum transfer time tau0 = pi/(g sqrt(delta))
    and the unit phase picked up at tau0; a negative verdict names the first
    violated condition.
    """

    verdict: str
    u: int
    v: int
    failed_condition: str | None = None
    delta: int | None = None
    g: int | None = None
    tau0: float | None = None
    phase: complex | None = None
    support: tuple[QuadraticNumber, ...] = ()
    s_plus: tuple[QuadraticNumber, ...] = ()
    s_minus: tuple[QuadraticNumber, ...] = ()
    fidelity_at_tau0: float | None = None
    reports: tuple["NoPSTReport", ...] = ()

    @property
    def is_pst(self) -> bool:
        return self.verdict == "PST"

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict, "u": self.u, "v": self.v}
        if self.is_pst:
            out["delta"] = self.delta
            out["g"] = self.g
            out["tau0"] = self.tau0
            out["phase"] = {"re": self.phase.real, "im": self.phase.imag}
            out["fidelity_at_tau0"] = self.fidelity_at_tau0
        else:
            out["failed_condition"] = self.failed_condition
        if self.support:
            out["support"] = [x.render() for x in self.support]
            out["s_plus"] = [x.render() for x in self.s_plus]
            out["s_minus"] = [x.render() for x in self.s_minus]
        if self.reports:
            out["theorem_reports"] = [r.to_dict() for r in self.reports]
        return out


@dataclass(frozen=True)
class NoPSTReport:
    """A fired no-transfer predicate with the data that triggered it."""

    kind: str
    parameters: dict
    conclusion: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "parameters": self.parameters, "conclusion": self.conclusion}


def is_periodic_vertex(support_values: Iterable[QuadraticNumber]) -> bool:
    """Periodicity from the exact eigenvalue support: all integers, or all of
    the shared form (a + b sqrt(delta))/2."""
    return classify_periodicity_form(support_values).holds


def exact_vertex_support(g: Graph, v: int, spec: ExactSpectrum | None = None) -> set[QuadraticNumber]:
    """Exact eigenvalue support of a vertex; requires a fully quadratic spectrum."""
    if spec is None:
        spec = exact_spectrum(g.adjacency)
    if not spec.fully_quadratic:
        raise ValueError("support is undecidable in the exact layer: spectrum has degree >= 3 eigenvalues")
    out: set[QuadraticNumber] = set()
    for value, _ in spec.entries:
        proj = exact_eigenprojector(g.adjacency, spec, value)
        if not column_is_zero(projector_column(proj, v)):
            out.add(value)
    return out


def certify_pst(
    g: Graph,
    u: int,
    v: int,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> PSTCertificate:
    """Decide perfect state transfer between two distinct vertices.

    Checks, in order: strong cospectrality, the integer/quadratic-integer
    shared-form condition on the support, and the parity rule between the sign
    classes and the scaled gaps (lambda_max - lambda)/(g sqrt(delta)).  A
    positive verdict is re-validated numerically at tau0.
    """
    if u == v:
        raise ValueError("self-transfer is periodicity, not state transfer; pick distinct vertices")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("vertex index out of range")
    d = eigendecompose(g, cluster_tol)
    spec = exact_spectrum(g.adjacency)

    if spec.fully_quadratic:
        supp_u, supp_v, s_plus, s_minus = _exact_sign_classes(g, spec, u, v)
    else:
        supp_u, supp_v, s_plus, s_minus = _numeric_sign_classes(d, spec, u, v, support_tol)
        if any(x is None for x in supp_u | supp_v):
            # Unidentifiable values are provably of degree >= 3: no quadratic form.
            support = tuple(sorted((x for x in supp_u if x is not None), key=float))
            return PSTCertificate("NoPST", u, v, failed_condition=SUPPORT_NOT_QUADRATIC, support=support)

    support = tuple(sorted(supp_u, key=float, reverse=True))
    if supp_u != supp_v or (supp_u - (set(s_plus) | set(s_minus))):
        return PSTCertificate(
            "NoPST", u, v,
            failed_condition=NOT_STRONGLY_COSPECTRAL,
            support=support, s_plus=s_plus, s_minus=s_minus,
        )

    form = classify_periodicity_form(supp_u)
    quad_ints = all(is_quadratic_integer(x) for x in supp_u if x.sign() != 0)
    if not form.holds or not quad_ints:
        return PSTCertificate(
            "NoPST", u, v,
            failed_condition=SUPPORT_NOT_QUADRATIC,
            support=support, s_plus=s_plus, s_minus=s_minus,
        )

    delta = form.delta
    lam0 = max(supp_u, key=float)
    b0 = form.b_values[lam0]
    gaps: dict[QuadraticNumber, int] = {}
    for lam in supp_u:
        diff = b0 - form.b_values[lam]
        if diff % 2 != 0:
            return PSTCertificate(
                "NoPST", u, v,
                failed_condition=SUPPORT_NOT_QUADRATIC,
                support=support, s_plus=s_plus, s_minus=s_minus,
            )
        gaps[lam] = diff // 2
    g_div = math.gcd(*(abs(m) for m in gaps.values())) if gaps else 0
    if g_div == 0:
        return PSTCertificate(
            "NoPST", u, v,
            failed_condition=PARITY_VIOLATION,
            support=support, s_plus=s_plus, s_minus=s_minus,
        )
    plus_set, minus_set = set(s_plus), set(s_minus)
    for lam, m in gaps.items():
        even = (m // g_div) % 2 == 0
        if even != (lam in plus_set) or (not even) != (lam in minus_set):
            return PSTCertificate(
                "NoPST", u, v,
                failed_condition=PARITY_VIOLATION,
                support=support, s_plus=s_plus, s_minus=s_minus,
            )

    tau0 = math.pi / (g_div * math.sqrt(delta))
    phase = cmath.exp(-1j * tau0 * float(lam0))
    fidelity = abs(transition_amplitude(d, u, v, tau0))
    if fidelity < 1 - PST_FIDELITY_TOL:
        raise ArithmeticError(
            f"certified PST but numeric fidelity at tau0 is {fidelity}; inconsistent decomposition"
        )
    return PSTCertificate(
        "PST", u, v,
        delta=delta, g=g_div, tau0=tau0, phase=phase,
        support=support, s_plus=s_plus, s_minus=s_minus,
        fidelity_at_tau0=float(fidelity**2),
    )


def _exact_sign_classes(
    g: Graph, spec: ExactSpectrum, u: int, v: int
) -> tuple[set[QuadraticNumber], set[QuadraticNumber], tuple[QuadraticNumber, ...], tuple[QuadraticNumber, ...]]:
    supp_u: set[QuadraticNumber] = set()
    supp_v: set[QuadraticNumber] = set()
    s_plus: list[QuadraticNumber] = []
    s_minus: list[QuadraticNumber] = []
    for value, _ in spec.entries:
        proj = exact_eigenprojector(g.adjacency, spec, value)
        cu = projector_column(proj, u)
        cv = projector_column(proj, v)
        zu, zv = column_is_zero(cu), column_is_zero(cv)
        if not zu:
            supp_u.add(value)
        if not zv:
            supp_v.add(value)
        if zu or zv:
            continue
        if all(a == b for a, b in zip(cu, cv)):
            s_plus.append(value)
        elif all(a == -b for a, b in zip(cu, cv)):
            s_minus.append(value)
    key = lambda x: -float(x)
    return supp_u, supp_v, tuple(sorted(s_plus, key=key)), tuple(sorted(s_minus, key=key))


def _numeric_sign_classes(
    d: SpectralDecomposition, spec: ExactSpectrum, u: int, v: int, support_tol: float
) -> tuple[set, set, tuple, tuple]:
    supp_u: set = set()
    supp_v: set = set()
    s_plus: list = []
    s_minus: list = []
    for entry in d.entries:
        exact = spec.match(entry.value)
        cu = entry.projector[:, u]
        cv = entry.projector[:, v]
        in_u = np.linalg.norm(cu) > support_tol
        in_v = np.linalg.norm(cv) > support_tol
        if in_u:
            supp_u.add(exact)
        if in_v:
            supp_v.add(exact)
        if not (in_u and in_v) or exact is None:
            continue
        if np.max(np.abs(cu - cv)) <= support_tol:
            s_plus.append(exact)
        elif np.max(np.abs(cu + cv)) <= support_tol:
            s_minus.append(exact)
    key = lambda x: -float(x)
    return supp_u, supp_v, tuple(sorted(s_plus, key=key)), tuple(sorted(s_minus, key=key))


def no_pst_by_regular_gap(
    spectrum: Sequence[tuple[QuadraticNumber, int]],
    r: int,
    k: int,
    n2: int,
) -> NoPSTReport | None:
    """No-transfer predicate for a connected r-regular integer-spectrum first
    factor: fires when sqrt((r-k)**2 + 4 n2 r**2) is irrational, making every
    corona vertex non-periodic.

    Returns None both when the hypotheses fail and when the radical is an
    integer (the predicate is silent either way).
    """
    if n2 < 1 or k < 0:
        return None
    if not spectrum or not all(val.is_integer for val, _ in spectrum):
        return None
    values = [int(val.p) for val, _ in spectrum]
    mults = {int(val.p): m for val, m in spectrum}
    if r != max(values) or mults.get(r) != 1:
        return None  # not the Perron value of a connected regular graph
    m = (r - k) ** 2 + 4 * n2 * r * r
    a, b = square_free_decompose(m)
    if b == 1:
        return None
    gap = QuadraticNumber(Fraction(0), Fraction(a), b)
    return NoPSTReport(
        kind="regular_gap_irrational",
        parameters={"r": r, "k": k, "n2": n2, "radicand": m, "gap": gap.render()},
        conclusion=(
            "no corona vertex is periodic (the branch gap of the regular eigenvalue is "
            "irrational), hence the corona admits no perfect state transfer"
        ),
    )


def non_periodicity_by_surd_support(supp: Iterable[QuadraticNumber]) -> NoPSTReport | None:
    """Fires when some support value is a non-zero integer multiple of a surd
    sqrt(delta') with delta' > 1: the vertex stays non-periodic in every
    corona with a regular second factor."""
    for lam in sorted(set(supp), key=float):
        if lam.p == 0 and lam.q != 0 and lam.q.denominator == 1 and lam.d > 1:
            return NoPSTReport(
                kind="support_multiple_of_surd",
                parameters={"eigenvalue": lam.render(), "surd": lam.d},
                conclusion=(
                    "the vertex is not periodic in any neighborhood corona with a regular "
                    "second factor, so no perfect state transfer starts there"
                ),
            )
    return None


def corona_no_pst_survey(g1: Graph, g2: Graph) -> list[NoPSTReport]:
    """Run every applicable no-transfer predicate for the corona of g1 and g2.

    When the surd-support predicate fires at every g1 vertex, an aggregate
    report records that the whole corona has no perfect state transfer.
    """
    k = regularity_degree(g2)
    if k is None:
        raise ValueError("second factor must be regular")
    spec1 = exact_spectrum(g1.adjacency)
    reports: list[NoPSTReport] = []
    r = regularity_degree(g1)
    if r is not None and g1.is_connected() and spec1.all_integer:
        rep = no_pst_by_regular_gap(spec1.entries, r, k, g2.n)
        if rep is not None:
            reports.append(rep)
    if spec1.fully_quadratic:
        fired = []
        for vtx in range(g1.n):
            supp = exact_vertex_support(g1, vtx, spec1)
            rep = non_periodicity_by_surd_support(supp)
            if rep is not None:
                fired.append(
                    NoPSTReport(rep.kind, {**rep.parameters, "vertex": vtx}, rep.conclusion)
                )
        reports.extend(fired)
        if len(fired) == g1.n and g1.n > 0:
            reports.append(
                NoPSTReport(
                    kind="no_periodic_vertex",
                    parameters={"n1": g1.n, "k": k, "n2": g2.n},
                    conclusion=(
                        "every first-factor vertex carries a surd support value, so no corona "
                        "vertex is periodic and the corona admits no perfect state transfer"
                    ),
                )
            )
    return reports


@dataclass(frozen=True)
class SupportRelation:
    """Verified support inclusion between an apex (v, 0) and a copy vertex (v, w)."""

    case: str  # "full_inclusion" | "zero_excluded"
    apex_support: tuple[float, ...]
    copy_support: tuple[float, ...]
    zero_in_copy_support: bool


def corona_support_relation(
    d1: SpectralDecomposition,
    corona: CoronaDecomposition,
    v: int,
    w: int,
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> SupportRelation:
    """Check the guaranteed support inclusions between (v, 0) and (v, w).

    With 0 outside the first-factor support of v the apex support is contained
    in the copy support; otherwise the inclusion holds after removing the
    apex-only eigenvalue 0.  A failed inclusion raises: it cannot happen for a
    correctly assembled decomposition.
    """
    n1, n2 = corona.n1, corona.n2
    if not (0 <= v < n1 and 0 <= w < n2):
        raise ValueError("vertex indices out of range")
    scale = max(1.0, float(np.abs(d1.values).max()))
    zero_in_supp1 = any(
        abs(e.value) <= 1e-9 * scale and np.linalg.norm(e.projector[:, v]) > support_tol
        for e in d1.entries
    )
    spc = corona.to_spectral()
    apex = v
    copy_vertex = n1 + v * n2 + w
    s_apex = set(support_entry_indices(spc, apex, support_tol))
    s_copy = set(support_entry_indices(spc, copy_vertex, support_tol))
    corona_scale = max(1.0, float(np.abs(spc.values).max()))
    zero_idx = {
        i for i, e in enumerate(corona.entries) if abs(e.value) <= 1e-9 * corona_scale
    }
    if zero_in_supp1:
        if not zero_idx & s_apex:
            raise ArithmeticError("zero eigenvalue missing from apex support")
        if not (s_apex - zero_idx) <= s_copy:
            raise ArithmeticError("support inclusion (minus zero) failed: implementation bug")
        case = "zero_excluded"
    else:
        if not s_apex <= s_copy:
            raise ArithmeticError("support inclusion failed: implementation bug")
        case = "full_inclusion"
    values = spc.values
    return SupportRelation(
        case=case,
        apex_support=tuple(float(values[i]) for i in sorted(s_apex)),
        copy_support=tuple(float(values[i]) for i in sorted(s_copy)),
        zero_in_copy_support=bool(zero_idx & s_copy),
    )

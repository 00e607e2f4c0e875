"""Pretty-good-state-transfer witnesses: the simultaneous-approximation engine
and the two corona constructions (empty copies over a PST base; cycle-4 host)."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .charpoly import exact_spectrum
from .corona import apex_amplitude
from .errors import BudgetExceededError, HypothesisError
from .graphs import Graph, build_family, regularity_degree
from .pst import certify_pst
from .quadratics import square_free_decompose
from .spectral import eigendecompose, max_fidelity_scan, transition_amplitudes

DEFAULT_ALPHA_MAX = 10**6
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ApproximationWitness:
    """Integer alpha making every alpha*sqrt(b_j) - c_j land within epsilon of
    its target fractional shift."""

    alpha: int
    radicands: tuple[int, ...]
    targets: tuple[float, ...]
    c_values: tuple[int, ...]
    residuals: tuple[float, ...]
    epsilon: float
    n_min: int


@dataclass(frozen=True)
class PGSTWitness:
    """A concrete time with near-unit transfer fidelity between two vertices."""

    u: int
    v: int
    t0: float
    fidelity: float
    epsilon: float
    construction: str  # "empty_copies" | "cycle4_host" | "scan"
    meets_target: bool
    t0_coeff: Fraction | None = None  # t0 as an exact rational multiple of pi
    approximation: ApproximationWitness | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "u": self.u,
            "v": self.v,
            "t0": {
                "coeff_of_pi": str(self.t0_coeff) if self.t0_coeff is not None else None,
                "float": self.t0,
            },
            "fidelity": self.fidelity,
            "epsilon": self.epsilon,
            "construction": self.construction,
            "meets_target": self.meets_target,
        }
        if self.approximation is not None:
            out["alpha"] = self.approximation.alpha
            out["radicands"] = list(self.approximation.radicands)
            out["c_values"] = list(self.approximation.c_values)
            out["residuals"] = list(self.approximation.residuals)
            out["residual_bound"] = self.approximation.epsilon
        return out


def _dedup(radicands: Sequence[int], targets: Sequence[float]) -> tuple[list[int], list[float]]:
    if len(radicands) != len(targets):
        raise ValueError("radicands and targets must have equal length")
    if not radicands:
        raise ValueError("need at least one radicand")
    rads: list[int] = []
    tgts: list[float] = []
    for b, t in zip(radicands, targets):
        b = int(b)
        if b <= 1 or square_free_decompose(b)[0] != 1:
            raise ValueError(f"radicand {b} must be square-free and > 1")
        if b in rads:
            if abs(tgts[rads.index(b)] - t) > 1e-12:
                raise ValueError(f"duplicate radicand {b} with conflicting targets")
            continue
        rads.append(b)
        tgts.append(float(t))
    return rads, tgts


def _candidate_alphas(
    radicands: Sequence[int],
    targets: Sequence[float],
    eps: float,
    n_min: int,
    alpha_max: int,
    threads: int = 1,
) -> Iterator[tuple[int, tuple[int, ...], tuple[float, ...]]]:
    """Qualifying alphas in increasing order, vectorised over chunks.

    Chunks are scanned in batches (optionally on a thread pool) and read back
    in range order, so results do not depend on scheduling.
    """
    roots = np.sqrt(np.array(radicands, dtype=float))
    tgt = np.array(targets, dtype=float)

    def scan(lo: int, hi: int) -> list[tuple[int, tuple[int, ...], tuple[float, ...]]]:
        alphas = np.arange(lo, hi, dtype=float)
        x = alphas[:, None] * roots[None, :] - tgt[None, :]
        c = np.round(x)
        res = np.abs(x - c)
        ok = np.nonzero((res < eps).all(axis=1))[0]
        return [
            (int(alphas[i]), tuple(int(v) for v in c[i]), tuple(float(v) for v in res[i]))
            for i in ok
        ]

    starts = list(range(n_min + 1, alpha_max + 1, _CHUNK))
    bounds = [(lo, min(lo + _CHUNK, alpha_max + 1)) for lo in starts]
    if threads <= 1:
        for lo, hi in bounds:
            yield from scan(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for i in range(0, len(bounds), threads):
            batch = bounds[i : i + threads]
            for hits in pool.map(lambda b: scan(*b), batch):
                yield from hits


def simultaneous_approx(
    radicands: Sequence[int],
    targets: Sequence[float],
    eps: float,
    n_min: int = 0,
    alpha_max: int = DEFAULT_ALPHA_MAX,
    threads: int = 1,
) -> ApproximationWitness:
    """Smallest integer alpha in (n_min, alpha_max] with
    |alpha*sqrt(b_j) - c_j - target_j| < eps for every j, c_j the nearest integer.

    Duplicate radicands must carry the same target and collapse to a single
    constraint.  Exhausting alpha_max raises BudgetExceededError: existence is
    guaranteed only for unbounded alpha.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if alpha_max <= n_min:
        raise ValueError("alpha_max must exceed n_min")
    rads, tgts = _dedup(radicands, targets)
    for alpha, cs, res in _candidate_alphas(rads, tgts, eps, n_min, alpha_max, threads):
        if alpha <= n_min or any(r >= eps for r in res):
            raise ArithmeticError("scan returned a non-qualifying alpha")
        return ApproximationWitness(
            alpha=alpha,
            radicands=tuple(rads),
            targets=tuple(tgts),
            c_values=cs,
            residuals=res,
            epsilon=eps,
            n_min=n_min,
        )
    raise BudgetExceededError(
        f"no qualifying alpha <= {alpha_max} at residual bound {eps}; inconclusive"
    )


def residual_budget(eps: float, n_terms: int, max_scale: int) -> float:
    """Residual bound handed to the approximation engine: eps / (4 m max_j a_j),
    conservative enough that the accumulated cosine deficits keep the final
    fidelity above 1 - eps (re-checked on every candidate)."""
    return eps / (4 * n_terms * max_scale)


def pgst_witness_empty_copies(
    g1: Graph,
    x: int,
    y: int,
    n2: int,
    eps: float,
    alpha_max: int = DEFAULT_ALPHA_MAX,
    threads: int = 1,
) -> PGSTWitness:
    """PGST witness between apexes (x,0), (y,0) of g1 with n2 empty copies.

    Needs g1 with certified PST between x and y at time pi/g (integer spectrum)
    and sqrt(4 n2 + 1) irrational.  The witness time is (4 alpha + 2/g) pi with
    alpha chosen so every branch gap is within budget of a multiple of 2 pi.
    """
    if eps <= 0 or n2 < 1:
        raise ValueError("need eps > 0 and n2 >= 1")
    cert = certify_pst(g1, x, y)
    if not cert.is_pst:
        raise HypothesisError(
            f"first factor has no PST between {x} and {y} (failed: {cert.failed_condition})"
        )
    if cert.delta != 1:
        raise HypothesisError("construction needs an integer-spectrum PST base (delta = 1)")
    g_div = cert.g
    a_s, b_s = square_free_decompose(4 * n2 + 1)
    if b_s == 1:
        raise HypothesisError(f"sqrt(4 n2 + 1) = {a_s} is an integer; hypothesis not met")
    nonzero = [int(lam.p) for lam in cert.support if lam.sign() != 0]
    scales = [abs(lam) * a_s for lam in nonzero]
    eps_resid = residual_budget(eps, len(nonzero), max(scales))
    target = -math.sqrt(b_s) / (2 * g_div)
    d1 = eigendecompose(g1)
    spec1 = exact_spectrum(g1.adjacency)
    for alpha, cs, res in _candidate_alphas([b_s], [target], eps_resid, 0, alpha_max, threads):
        coeff = 4 * alpha + Fraction(2, g_div)
        t0 = float(coeff) * math.pi
        fid = abs(apex_amplitude(d1, 0, n2, x, y, t0, exact1=spec1)) ** 2
        if fid > 1 - eps:
            return PGSTWitness(
                u=x, v=y, t0=t0, fidelity=float(fid), epsilon=eps,
                construction="empty_copies", meets_target=True, t0_coeff=coeff,
                approximation=ApproximationWitness(
                    alpha=alpha, radicands=(b_s,), targets=(target,),
                    c_values=cs, residuals=res, epsilon=eps_resid, n_min=0,
                ),
            )
    raise BudgetExceededError(f"no PGST witness found with alpha <= {alpha_max}")


def pgst_witness_cycle4(
    g2: Graph,
    eps: float,
    alpha_max: int = DEFAULT_ALPHA_MAX,
    u: int = 0,
    v: int = 2,
    threads: int = 1,
) -> PGSTWitness:
    """PGST witness between antipodal apexes of the corona of a 4-cycle with a
    connected k-regular graph, k divisible by 4 and both branch gaps
    sqrt((2 -+ k)**2 + 16 n2) irrational.  Witness time (4 alpha + 1) pi."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = regularity_degree(g2)
    if k is None or not g2.is_connected():
        raise HypothesisError("second factor must be connected and regular")
    if k % 4 != 0:
        raise HypothesisError(f"degree {k} is not divisible by 4")
    if abs(u - v) != 2 or not (0 <= u < 4 and 0 <= v < 4):
        raise HypothesisError("witness vertices must be an antipodal apex pair of the 4-cycle")
    n2 = g2.n
    a1, b1 = square_free_decompose((2 - k) ** 2 + 16 * n2)
    a3, b3 = square_free_decompose((2 + k) ** 2 + 16 * n2)
    if b1 == 1 or b3 == 1:
        raise HypothesisError("a branch gap is an integer; hypothesis not met")
    eps_resid = residual_budget(eps, 2, max(a1, a3))
    radicands = [b1, b3]
    targets = [-math.sqrt(b1) / 4, -math.sqrt(b3) / 4]
    rads, tgts = _dedup(radicands, targets)
    g1 = build_family("cycle", 4)
    d1 = eigendecompose(g1)
    spec1 = exact_spectrum(g1.adjacency)
    for alpha, cs, res in _candidate_alphas(rads, tgts, eps_resid, 0, alpha_max, threads):
        coeff = Fraction(4 * alpha + 1)
        t0 = float(coeff) * math.pi
        fid = abs(apex_amplitude(d1, k, n2, u, v, t0, exact1=spec1)) ** 2
        if fid > 1 - eps:
            return PGSTWitness(
                u=u, v=v, t0=t0, fidelity=float(fid), epsilon=eps,
                construction="cycle4_host", meets_target=True, t0_coeff=coeff,
                approximation=ApproximationWitness(
                    alpha=alpha, radicands=tuple(rads), targets=tuple(tgts),
                    c_values=cs, residuals=res, epsilon=eps_resid, n_min=0,
                ),
            )
    raise BudgetExceededError(f"no PGST witness found with alpha <= {alpha_max}")


def pgst_search_generic(
    g: Graph,
    u: int,
    v: int,
    eps: float,
    t_max: float,
    steps: int,
    t_min: float = 0.0,
) -> PGSTWitness:
    """Direct grid-plus-refinement fidelity search on (t_min, t_max].

    Always returns the best time found; meets_target records whether it clears
    1 - eps.  Self-transfer searches only after the walker has actually left
    (first grid point with fidelity below 1/2), so a revival is reported rather
    than the trivial start."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    d = eigendecompose(g)
    lo = t_min if t_min > 0 else t_max / steps
    if u == v and t_min <= 0.0:
        times = np.linspace(0.0, t_max, steps)
        fid = np.abs(transition_amplitudes(d, u, v, times)) ** 2
        away = np.nonzero(fid < 0.5)[0]
        if len(away):
            lo = float(times[away[0]])
    t_star, f_star = max_fidelity_scan(d, u, v, t_max, steps, t_min=lo)
    return PGSTWitness(
        u=u, v=v, t0=float(t_star), fidelity=float(f_star), epsilon=eps,
        construction="scan", meets_target=bool(f_star > 1 - eps),
    )

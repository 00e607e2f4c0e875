"""Numeric spectral engine: clustered eigendecompositions, eigenprojectors,
eigenvalue supports, strong cospectrality, transition amplitudes and fidelity scans."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph

DEFAULT_CLUSTER_TOL = 1e-8
DEFAULT_SUPPORT_TOL = 1e-8
DEFAULT_SIGN_TOL = 1e-8

_GOLDEN = (math.sqrt(5) - 1) / 2


_TWO_PI = 2 * np.longdouble(np.pi)


@dataclass(frozen=True)
class SpectralEntry:
    value: float
    multiplicity: int
    projector: np.ndarray
    # Extended-precision eigenvalue (longdouble Rayleigh quotient): long-time
    # phases t*lambda stay accurate far beyond double rounding.
    value_hp: object = None

    @property
    def hp(self) -> np.longdouble:
        return self.value_hp if self.value_hp is not None else np.longdouble(self.value)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (strictly descending) with orthogonal eigenprojectors that
    sum to the identity and reconstruct the matrix."""

    entries: tuple[SpectralEntry, ...]
    source: str = "numeric"

    @property
    def n(self) -> int:
        return int(self.entries[0].projector.shape[0])

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries])

    @property
    def values_hp(self) -> np.ndarray:
        return np.array([e.hp for e in self.entries], dtype=np.longdouble)

    def eigenvalues_with_multiplicity(self) -> np.ndarray:
        return np.concatenate([[e.value] * e.multiplicity for e in self.entries])

    def weights(self, u: int, v: int) -> np.ndarray:
        """Per-eigenvalue amplitude weights (e_u^T f e_v)."""
        return np.array([e.projector[u, v] for e in self.entries])

    def reconstruct(self) -> np.ndarray:
        return sum(e.value * e.projector for e in self.entries)


@dataclass(frozen=True)
class SupportSet:
    vertex: int
    eigenvalues: tuple[float, ...]


@dataclass(frozen=True)
class CospectralityReport:
    u: int
    v: int
    strongly_cospectral: bool
    s_plus: tuple[float, ...]
    s_minus: tuple[float, ...]


@dataclass(frozen=True)
class FidelitySeries:
    times: np.ndarray
    fidelities: np.ndarray

    def to_csv(self) -> str:
        lines = ["t,fidelity"]
        lines += [f"{t:.17g},{f:.17g}" for t, f in zip(self.times, self.fidelities)]
        return "\n".join(lines) + "\n"


def eigendecompose(g: Graph | np.ndarray, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> SpectralDecomposition:
    """Full symmetric eigendecomposition with eigenvalues merged into clusters
    of width cluster_tol * max(1, spectral radius).

    Cluster eigenvalues are Rayleigh-quotient refined (trace(P A) / rank), which
    keeps phases accurate in long-time amplitude evaluations.
    """
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    a = (g.adjacency if isinstance(g, Graph) else np.asarray(g)).astype(float)
    try:
        w, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # iteration cap exceeded
        raise ArithmeticError(f"eigensolver failed to converge: {exc}") from exc
    scale = max(1.0, float(np.abs(w).max()))
    threshold = cluster_tol * scale
    a_hp = a.astype(np.longdouble)
    entries: list[SpectralEntry] = []
    start = 0
    for i in range(1, len(w) + 1):
        if i < len(w) and w[i] - w[i - 1] <= threshold:
            continue
        block = vecs[:, start:i]
        proj = block @ block.T
        proj = (proj + proj.T) / 2
        proj.setflags(write=False)
        # Per-vector Rayleigh quotients in extended precision; the quotient's
        # second-order optimality makes the residual eigenvector noise moot.
        block_hp = block.astype(np.longdouble)
        num = np.einsum("ij,ij->j", block_hp, a_hp @ block_hp)
        den = np.einsum("ij,ij->j", block_hp, block_hp)
        value_hp = np.longdouble((num / den).mean())
        entries.append(
            SpectralEntry(
                value=float(value_hp),
                multiplicity=i - start,
                projector=proj,
                value_hp=value_hp,
            )
        )
        start = i
    entries.sort(key=lambda e: -e.value)
    return SpectralDecomposition(entries=tuple(entries), source="numeric")


def eigenvalue_support(d: SpectralDecomposition, v: int, tol: float = DEFAULT_SUPPORT_TOL) -> SupportSet:
    """Eigenvalues whose projector column at v is numerically non-zero."""
    _check_vertex(d, v)
    vals = [e.value for e in d.entries if np.linalg.norm(e.projector[:, v]) > tol]
    return SupportSet(vertex=v, eigenvalues=tuple(vals))


def support_entry_indices(d: SpectralDecomposition, v: int, tol: float = DEFAULT_SUPPORT_TOL) -> tuple[int, ...]:
    _check_vertex(d, v)
    return tuple(
        i for i, e in enumerate(d.entries) if np.linalg.norm(e.projector[:, v]) > tol
    )


def strong_cospectrality(
    d: SpectralDecomposition,
    u: int,
    v: int,
    tol: float = DEFAULT_SIGN_TOL,
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> CospectralityReport:
    """Classify each support eigenvalue by the sign of f e_u against f e_v.

    Strong cospectrality holds when the two supports coincide and every support
    eigenvalue lands in S+ (equal columns) or S- (negated columns).
    """
    _check_vertex(d, u)
    _check_vertex(d, v)
    s_plus: list[float] = []
    s_minus: list[float] = []
    ok = True
    for e in d.entries:
        cu = e.projector[:, u]
        cv = e.projector[:, v]
        in_u = np.linalg.norm(cu) > support_tol
        in_v = np.linalg.norm(cv) > support_tol
        if not in_u and not in_v:
            continue
        if in_u != in_v:
            ok = False
            continue
        if np.max(np.abs(cu - cv)) <= tol:
            s_plus.append(e.value)
        elif np.max(np.abs(cu + cv)) <= tol:
            s_minus.append(e.value)
        else:
            ok = False
    return CospectralityReport(u=u, v=v, strongly_cospectral=ok, s_plus=tuple(s_plus), s_minus=tuple(s_minus))


def phase_mod_two_pi(t, values_hp: np.ndarray) -> np.ndarray:
    """t * lambda reduced mod 2 pi, computed in extended precision and returned
    as double: keeps phases meaningful at witness times of order 1e6."""
    theta = np.mod(np.longdouble(t) * values_hp, _TWO_PI)
    return theta.astype(float)


def transition_amplitude(d: SpectralDecomposition, u: int, v: int, t: float) -> complex:
    """e_u^T exp(-itA) e_v via the spectral sum."""
    if not math.isfinite(t):
        raise ValueError("time must be finite")
    _check_vertex(d, u)
    _check_vertex(d, v)
    w = d.weights(u, v)
    theta = phase_mod_two_pi(t, d.values_hp)
    return complex(np.sum(w * np.exp(-1j * theta)))


def transition_amplitudes(d: SpectralDecomposition, u: int, v: int, times: np.ndarray) -> np.ndarray:
    """Vectorised amplitude evaluation over an array of times."""
    _check_vertex(d, u)
    _check_vertex(d, v)
    w = d.weights(u, v)
    theta = np.mod(
        np.outer(np.asarray(times, dtype=np.longdouble), d.values_hp), _TWO_PI
    ).astype(float)
    return np.exp(-1j * theta) @ w


def fidelity_series(d: SpectralDecomposition, u: int, v: int, t_max: float, steps: int) -> FidelitySeries:
    """|amplitude|**2 on the uniform inclusive grid 0..t_max."""
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    times = np.linspace(0.0, t_max, steps)
    fid = np.abs(transition_amplitudes(d, u, v, times)) ** 2
    return FidelitySeries(times=times, fidelities=fid)


def max_fidelity_scan(
    d: SpectralDecomposition,
    u: int,
    v: int,
    t_max: float,
    steps: int,
    t_min: float = 0.0,
) -> tuple[float, float]:
    """Grid argmax of the fidelity followed by one golden-section refinement
    pass around the best grid point; returns (t_star, fidelity_star)."""
    if t_max <= t_min:
        raise ValueError("t_max must exceed t_min")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if u == v and t_min == 0.0:
        return 0.0, 1.0
    times = np.linspace(t_min, t_max, steps)
    fid = np.abs(transition_amplitudes(d, u, v, times)) ** 2
    # Earliest grid point within discretisation slack of the maximum, so
    # equal-height revivals report their first occurrence; the refinement pass
    # below recovers the peak itself.
    dt = (t_max - t_min) / (steps - 1)
    scale = max(1.0, float(np.abs(d.values).max()))
    window = max(1e-12, (scale * dt) ** 2)
    best = int(np.nonzero(fid >= fid.max() - window)[0][0])
    lo = times[max(best - 1, 0)]
    hi = times[min(best + 1, steps - 1)]
    t_star, f_star = _golden_max(lambda t: abs(transition_amplitude(d, u, v, t)) ** 2, lo, hi)
    if f_star < fid[best]:
        t_star, f_star = float(times[best]), float(fid[best])
    return t_star, f_star


def _golden_max(fn, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    e = a + _GOLDEN * (b - a)
    fc, fe = fn(c), fn(e)
    for _ in range(iters):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, e, fe
            e = a + _GOLDEN * (b - a)
            fe = fn(e)
        if b - a < 1e-14 * max(1.0, abs(b)):
            break
    t = (a + b) / 2
    return float(t), float(fn(t))


def _check_vertex(d: SpectralDecomposition, v: int) -> None:
    if not (0 <= v < d.n):
        raise ValueError(f"vertex {v} out of range for n={d.n}")

"""Closed-form-vs-numeric verification of a corona construction."""

from __future__ import annotations

import math

import numpy as np

from .corona import apex_amplitude, corona_closed_form
from .graphs import Graph, neighborhood_corona, regularity_degree
from .spectral import eigendecompose, transition_amplitude

_PHI = (math.sqrt(5) - 1) / 2
#: 32 fixed, reproducible sample times in [0, 20] for amplitude verification.
VERIFY_TIMES = tuple(20.0 * math.modf((i + 1) * _PHI)[0] for i in range(32))


def verify_corona(
    g1: Graph,
    g2: Graph,
    eig_tol: float = 1e-8,
    proj_tol: float = 1e-9,
    amp_tol: float = 1e-9,
    provided: Graph | None = None,
) -> dict:
    """Check the closed-form corona data against a direct numeric treatment.

    Three checks (plus an optional file comparison): eigenvalue multisets,
    projector laws of the closed-form decomposition, and apex amplitudes at 32
    fixed sample times.  Returns {"passed": bool, "n": int, "checks": [...]}.
    """
    corona = neighborhood_corona(g1, g2)
    checks: list[dict] = []

    if provided is not None:
        matches = provided.n == corona.n and bool(
            np.array_equal(provided.adjacency, corona.adjacency)
        )
        checks.append(
            {"name": "file_matches_construction", "passed": matches, "max_deviation": None}
        )

    cd = corona_closed_form(g1, g2)
    sp = cd.to_spectral()
    dn = eigendecompose(corona)
    ev_dev = float(
        np.max(
            np.abs(
                np.sort(sp.eigenvalues_with_multiplicity())
                - np.sort(dn.eigenvalues_with_multiplicity())
            )
        )
    )
    checks.append(
        {"name": "eigenvalue_multisets", "passed": ev_dev <= eig_tol, "max_deviation": ev_dev}
    )

    n = sp.n
    comp = float(np.max(np.abs(sum(e.projector for e in sp.entries) - np.eye(n))))
    idem = max(
        float(np.max(np.abs(e.projector @ e.projector - e.projector))) for e in sp.entries
    )
    orth = 0.0
    for i in range(len(sp.entries)):
        for j in range(i + 1, len(sp.entries)):
            orth = max(
                orth,
                float(np.max(np.abs(sp.entries[i].projector @ sp.entries[j].projector))),
            )
    proj_dev = max(comp, idem, orth)
    checks.append(
        {"name": "projector_laws", "passed": proj_dev <= proj_tol, "max_deviation": proj_dev}
    )

    d1 = eigendecompose(g1)
    k = regularity_degree(g2)
    amp_dev = 0.0
    for t in VERIFY_TIMES:
        for u in range(g1.n):
            for v in range(g1.n):
                closed = apex_amplitude(d1, k, g2.n, u, v, t)
                numeric = transition_amplitude(dn, u, v, t)
                amp_dev = max(amp_dev, abs(closed - numeric))
    checks.append(
        {"name": "apex_amplitudes", "passed": amp_dev <= amp_tol, "max_deviation": amp_dev}
    )

    return {"passed": all(c["passed"] for c in checks), "n": corona.n, "checks": checks}

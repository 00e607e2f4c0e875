import math

import numpy as np
import pytest

from coronawalk.graphs import Graph, build_family, neighborhood_corona
from coronawalk.spectral import (
    SpectralDecomposition,
    eigendecompose,
    eigenvalue_support,
    fidelity_series,
    max_fidelity_scan,
    strong_cospectrality,
    transition_amplitude,
    transition_amplitudes,
)


def expm_oracle(a: np.ndarray, t: float) -> np.ndarray:
    """Scaling-and-squaring Taylor series for exp(-i t A); independent of any
    eigendecomposition."""
    m = -1j * t * a.astype(complex)
    norm = np.linalg.norm(m, 1)
    s = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    m = m / (2**s)
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, 30):
        term = term @ m / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


TEST_GRAPHS = (
    [build_family("path", n) for n in (2, 3, 5, 10)]
    + [build_family("cycle", n) for n in (3, 4, 6, 9)]
    + [build_family("complete", n) for n in (1, 2, 5, 8)]
    + [
        neighborhood_corona(build_family("cycle", 4), build_family("complete", 5)),
        neighborhood_corona(build_family("path", 3), build_family("cycle", 3)),
        neighborhood_corona(build_family("complete", 3), build_family("cycle", 4)),
        neighborhood_corona(build_family("path", 4), build_family("complete", 4)),  # n = 20
        neighborhood_corona(build_family("cycle", 6), build_family("path", 7)),  # n = 48
    ]
)


class TestEigendecompose:
    def test_c4(self):
        d = eigendecompose(build_family("cycle", 4))
        assert [(round(e.value), e.multiplicity) for e in d.entries] == [(2, 1), (0, 2), (-2, 1)]

    def test_k1(self):
        d = eigendecompose(build_family("complete", 1))
        assert len(d.entries) == 1
        assert d.entries[0].value == 0.0 and d.entries[0].multiplicity == 1
        assert np.allclose(d.entries[0].projector, [[1.0]])

    def test_p3(self):
        d = eigendecompose(build_family("path", 3))
        vals = [e.value for e in d.entries]
        assert np.allclose(vals, [math.sqrt(2), 0.0, -math.sqrt(2)], atol=1e-12)
        assert all(e.multiplicity == 1 for e in d.entries)

    def test_descending_and_counts(self):
        for g in TEST_GRAPHS:
            d = eigendecompose(g)
            vals = [e.value for e in d.entries]
            assert vals == sorted(vals, reverse=True)
            assert sum(e.multiplicity for e in d.entries) == g.n

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            eigendecompose(build_family("path", 2), cluster_tol=0.0)

    @pytest.mark.parametrize("idx", range(len(TEST_GRAPHS)))
    def test_projector_laws_within_1e9(self, idx):
        g = TEST_GRAPHS[idx]
        d = eigendecompose(g)
        n = g.n
        total = sum(e.projector for e in d.entries)
        assert np.max(np.abs(total - np.eye(n))) < 1e-9
        for e in d.entries:
            assert np.max(np.abs(e.projector @ e.projector - e.projector)) < 1e-9
        for i in range(len(d.entries)):
            for j in range(i + 1, len(d.entries)):
                assert np.max(np.abs(d.entries[i].projector @ d.entries[j].projector)) < 1e-9
        assert np.max(np.abs(d.reconstruct() - g.adjacency)) < 1e-9


class TestSupport:
    def test_p3_middle(self):
        d = eigendecompose(build_family("path", 3))
        supp = eigenvalue_support(d, 1).eigenvalues
        assert np.allclose(sorted(supp), [-math.sqrt(2), math.sqrt(2)], atol=1e-12)

    def test_p3_endpoint(self):
        d = eigendecompose(build_family("path", 3))
        assert len(eigenvalue_support(d, 0).eigenvalues) == 3

    def test_k5_support_size_two(self):
        d = eigendecompose(build_family("complete", 5))
        for v in range(5):
            supp = eigenvalue_support(d, v).eigenvalues
            assert np.allclose(sorted(supp), [-1.0, 4.0], atol=1e-12)

    def test_complete_iff_support_two(self):
        # Regular connected graphs: support size 2 exactly for complete graphs.
        for g in [build_family("complete", n) for n in (2, 3, 5, 8)]:
            d = eigendecompose(g)
            assert all(len(eigenvalue_support(d, v).eigenvalues) == 2 for v in range(g.n))
        for g in [build_family("cycle", n) for n in (4, 5, 6)]:
            d = eigendecompose(g)
            assert all(len(eigenvalue_support(d, v).eigenvalues) >= 3 for v in range(g.n))

    def test_out_of_range(self):
        d = eigendecompose(build_family("path", 2))
        with pytest.raises(ValueError):
            eigenvalue_support(d, 5)


class TestStrongCospectrality:
    def test_c4_antipodal(self):
        d = eigendecompose(build_family("cycle", 4))
        rep = strong_cospectrality(d, 0, 2)
        assert rep.strongly_cospectral
        assert np.allclose(sorted(rep.s_plus), [-2.0, 2.0], atol=1e-9)
        assert np.allclose(rep.s_minus, [0.0], atol=1e-9)

    def test_self_pair(self):
        d = eigendecompose(build_family("cycle", 4))
        rep = strong_cospectrality(d, 1, 1)
        assert rep.strongly_cospectral
        assert len(rep.s_plus) == 3 and rep.s_minus == ()

    def test_p3_end_vs_middle(self):
        d = eigendecompose(build_family("path", 3))
        assert not strong_cospectrality(d, 0, 1).strongly_cospectral


class TestTransitionAmplitude:
    def test_identity_at_zero(self):
        d = eigendecompose(build_family("cycle", 5))
        for u in range(5):
            for v in range(5):
                amp = transition_amplitude(d, u, v, 0.0)
                assert abs(amp - (1.0 if u == v else 0.0)) < 1e-12

    def test_c4_pst_time(self):
        d = eigendecompose(build_family("cycle", 4))
        assert abs(abs(transition_amplitude(d, 0, 2, math.pi / 2)) - 1.0) < 1e-12

    def test_k2_quarter_pi(self):
        d = eigendecompose(build_family("complete", 2))
        amp = transition_amplitude(d, 0, 1, math.pi / 4)
        assert abs(abs(amp) - math.sqrt(2) / 2) < 1e-12
        # hand value: -i sin(pi/4)
        assert abs(amp - (-1j * math.sin(math.pi / 4))) < 1e-12

    def test_symmetry_and_time_reversal(self):
        # exp(-itA) is complex symmetric for symmetric A; conjugation is time
        # reversal, not transposition.
        g = neighborhood_corona(build_family("path", 3), build_family("cycle", 3))
        d = eigendecompose(g)
        for t in (0.3, 1.7, 12.9):
            for (u, v) in ((0, 5), (2, 11), (3, 4)):
                assert abs(transition_amplitude(d, u, v, t) - transition_amplitude(d, v, u, t)) < 1e-12
                assert abs(transition_amplitude(d, u, v, -t) - transition_amplitude(d, u, v, t).conjugate()) < 1e-12

    def test_unitarity(self):
        for g in (build_family("cycle", 6), neighborhood_corona(build_family("cycle", 4), build_family("complete", 5))):
            d = eigendecompose(g)
            for t in (0.7, 3.3, 21.1):
                for u in (0, g.n - 1):
                    total = sum(abs(transition_amplitude(d, u, v, t)) ** 2 for v in range(g.n))
                    assert abs(total - 1.0) < 1e-9

    def test_against_expm_oracle(self):
        for g in (build_family("path", 5), neighborhood_corona(build_family("cycle", 4), build_family("empty", 3))):
            d = eigendecompose(g)
            for t in (0.25, 1.0, 2.5):
                ref = expm_oracle(g.adjacency, t)
                for u in (0, 1):
                    for v in range(g.n):
                        assert abs(transition_amplitude(d, u, v, t) - ref[u, v]) < 1e-8

    def test_magnitude_bounded(self):
        d = eigendecompose(build_family("cycle", 7))
        times = np.linspace(0, 50, 500)
        amps = transition_amplitudes(d, 0, 3, times)
        assert (np.abs(amps) <= 1 + 1e-12).all()

    def test_rejects_nonfinite_time(self):
        d = eigendecompose(build_family("path", 2))
        with pytest.raises(ValueError):
            transition_amplitude(d, 0, 1, math.inf)


class TestFidelitySeries:
    def test_self_starts_at_one(self):
        d = eigendecompose(build_family("cycle", 5))
        series = fidelity_series(d, 2, 2, 10.0, 11)
        assert series.fidelities[0] == pytest.approx(1.0, abs=1e-12)

    def test_c4_grid_hits_pst(self):
        d = eigendecompose(build_family("cycle", 4))
        series = fidelity_series(d, 0, 2, math.pi, 5)  # grid contains pi/2
        idx = np.argmin(np.abs(series.times - math.pi / 2))
        assert series.fidelities[idx] == pytest.approx(1.0, abs=1e-12)

    def test_k2_max_at_half_pi(self):
        d = eigendecompose(build_family("complete", 2))
        series = fidelity_series(d, 0, 1, math.pi, 1001)
        best = np.argmax(series.fidelities)
        assert series.times[best] == pytest.approx(math.pi / 2, abs=2e-3)
        assert series.fidelities[best] == pytest.approx(1.0, abs=1e-6)

    def test_bounds_and_lengths(self):
        d = eigendecompose(build_family("cycle", 6))
        series = fidelity_series(d, 0, 3, 25.0, 503)
        assert len(series.times) == len(series.fidelities) == 503
        assert series.times[0] == 0.0 and series.times[-1] == 25.0
        assert ((series.fidelities >= 0) & (series.fidelities <= 1 + 1e-12)).all()

    def test_csv_format(self):
        d = eigendecompose(build_family("path", 2))
        csv = fidelity_series(d, 0, 1, 1.0, 3).to_csv()
        lines = csv.strip().split("\n")
        assert lines[0] == "t,fidelity"
        assert len(lines) == 4
        t, f = lines[1].split(",")
        assert float(t) == 0.0 and float(f) == pytest.approx(0.0, abs=1e-15)

    def test_validation(self):
        d = eigendecompose(build_family("path", 2))
        with pytest.raises(ValueError):
            fidelity_series(d, 0, 1, -1.0, 10)
        with pytest.raises(ValueError):
            fidelity_series(d, 0, 1, 1.0, 1)


class TestMaxFidelityScan:
    def test_self_trivial(self):
        d = eigendecompose(build_family("cycle", 5))
        assert max_fidelity_scan(d, 3, 3, 10.0, 101) == (0.0, 1.0)

    def test_c4_finds_pst(self):
        d = eigendecompose(build_family("cycle", 4))
        t_star, f_star = max_fidelity_scan(d, 0, 2, 2 * math.pi, 4001)
        assert t_star == pytest.approx(math.pi / 2, abs=1e-6)
        assert f_star >= 1 - 1e-9

    def test_p3_endpoints_find_transfer(self):
        # P3 transfers perfectly between its endpoints at pi/sqrt(2).
        d = eigendecompose(build_family("path", 3))
        t_star, f_star = max_fidelity_scan(d, 0, 2, 10.0, 20001)
        assert t_star == pytest.approx(math.pi / math.sqrt(2), abs=1e-6)
        assert f_star >= 1 - 1e-9

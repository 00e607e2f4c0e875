import math
from fractions import Fraction

import numpy as np
import pytest

from coronawalk.charpoly import exact_spectrum
from coronawalk.corona import (
    CoronaDecomposition,
    apex_amplitude,
    apex_support_exact,
    branch_values,
    corona_closed_form,
    corona_decomposition,
    corona_eigenvalues,
    corona_projectors_exact,
    delta_lambda,
    sum_exact_projectors,
)
from coronawalk.graphs import build_family, neighborhood_corona, regularity_degree
from coronawalk.quadratics import QuadraticNumber
from coronawalk.spectral import eigendecompose, transition_amplitude

Q = QuadraticNumber
INSTANCES = [
    (("cycle", 4), ("complete", 5)),
    (("path", 3), ("cycle", 3)),
    (("complete", 2), ("empty", 1)),
    (("cycle", 4), ("empty", 3)),
    (("complete", 3), ("cycle", 4)),
]


def qi(x: int) -> QuadraticNumber:
    return Q(Fraction(x))


class TestDeltaLambda:
    def test_sqrt84(self):
        d = delta_lambda(qi(2), 4, 5)
        assert d.exact == Q(Fraction(0), Fraction(2), 21)  # sqrt(84) = 2 sqrt(21)
        assert d.value == pytest.approx(math.sqrt(84))

    def test_sqrt116(self):
        d = delta_lambda(qi(-2), 4, 5)
        assert d.exact == Q(Fraction(0), Fraction(2), 29)
        assert d.value == pytest.approx(math.sqrt(116))

    def test_zero_eigenvalue(self):
        d = delta_lambda(qi(0), 4, 5)
        assert d.exact == qi(4)

    def test_float_path(self):
        d = delta_lambda(math.sqrt(2), 2, 3)
        assert d.exact is None
        assert d.value == pytest.approx(math.sqrt((math.sqrt(2) - 2) ** 2 + 12 * 2))

    def test_dominates_gap(self):
        for lam in range(-10, 11):
            for k in range(0, 9):
                d = delta_lambda(qi(lam), k, 3)
                assert d.value >= abs(lam - k) - 1e-12


class TestBranchIdentities:
    """Exact identities of the two branch values, spot-checked here and swept
    in the acceptance suite."""

    @pytest.mark.parametrize("lam,k,n2", [(2, 4, 5), (-2, 4, 5), (3, 0, 1), (-7, 8, 10), (1, 1, 2)])
    def test_identities(self, lam, k, n2):
        plus, minus = branch_values(qi(lam), k, n2)
        kq, lamq = qi(k), qi(lam)
        n2q = qi(n2)
        gap = delta_lambda(qi(lam), k, n2).exact
        cp, cm = plus - kq, minus - kq
        assert cp * cm == -(n2q * lamq * lamq)
        assert cp * cp + cm * cm == (lamq - kq) * (lamq - kq) + qi(2) * n2q * lamq * lamq
        assert cm * cm - cp * cp == gap * (kq - lamq)
        assert plus + minus == lamq + kq


class TestCoronaEigenvalues:
    def test_c4_k5(self):
        sp1 = [(qi(2), 1), (qi(0), 2), (qi(-2), 1)]
        sp2 = [(qi(4), 1), (qi(-1), 4)]
        out = corona_eigenvalues(sp1, sp2, k=4, n2=5)
        as_set = {(e.origin, e.value.render(), e.multiplicity) for e in out}
        assert as_set == {
            ("plus", "3 + sqrt(21)", 1),
            ("minus", "3 - sqrt(21)", 1),
            ("zero_plus", "4", 2),
            ("zero_minus", "0", 2),
            ("plus", "1 + sqrt(29)", 1),
            ("minus", "1 - sqrt(29)", 1),
            ("copy", "-1", 16),
        }
        assert sum(e.multiplicity for e in out) == 24

    def test_zero_branch(self):
        out = corona_eigenvalues([(qi(0), 1)], [(qi(0), 2)], k=0, n2=2)
        origins = {(e.origin, e.value.render()) for e in out}
        assert ("zero_plus", "0") in origins and ("zero_minus", "0") in origins

    def test_k1_with_single_empty_copy(self):
        out = corona_eigenvalues([(qi(0), 1)], [(qi(0), 1)], k=0, n2=1)
        assert sorted(e.value_float for e in out) == [0.0, 0.0]

    def test_multiplicity_mismatch(self):
        with pytest.raises(ValueError):
            corona_eigenvalues([(qi(1), 1)], [(qi(0), 3)], k=0, n2=2)

    def test_missing_regular_eigenvalue(self):
        with pytest.raises(ValueError):
            corona_eigenvalues([(qi(1), 1)], [(qi(0), 2)], k=1, n2=2)

    @pytest.mark.parametrize("spec1,spec2", INSTANCES)
    def test_matches_numeric_multiset(self, spec1, spec2):
        g1, g2 = build_family(*spec1), build_family(*spec2)
        k = regularity_degree(g2)
        sp1 = [(v, m) for v, m in exact_spectrum(g1.adjacency).entries]
        sp2 = [(v, m) for v, m in exact_spectrum(g2.adjacency).entries]
        out = corona_eigenvalues(sp1, sp2, k=k, n2=g2.n)
        closed = np.sort(np.concatenate([[e.value_float] * e.multiplicity for e in out]))
        numeric = np.sort(
            eigendecompose(neighborhood_corona(g1, g2)).eigenvalues_with_multiplicity()
        )
        assert np.max(np.abs(closed - numeric)) < 1e-8


class TestCoronaDecomposition:
    @pytest.mark.parametrize("spec1,spec2", INSTANCES)
    def test_projector_laws(self, spec1, spec2):
        g1, g2 = build_family(*spec1), build_family(*spec2)
        cd = corona_closed_form(g1, g2)
        sp = cd.to_spectral()
        n = sp.n
        assert np.max(np.abs(sum(e.projector for e in sp.entries) - np.eye(n))) < 1e-9
        for e in sp.entries:
            assert np.max(np.abs(e.projector @ e.projector - e.projector)) < 1e-9
        for i in range(len(sp.entries)):
            for j in range(i + 1, len(sp.entries)):
                assert np.max(np.abs(sp.entries[i].projector @ sp.entries[j].projector)) < 1e-9

    @pytest.mark.parametrize("spec1,spec2", INSTANCES)
    def test_reconstruction(self, spec1, spec2):
        g1, g2 = build_family(*spec1), build_family(*spec2)
        cd = corona_closed_form(g1, g2)
        adjacency = neighborhood_corona(g1, g2).adjacency
        assert np.max(np.abs(cd.to_spectral().reconstruct() - adjacency)) < 1e-10

    def test_zero_family_merges(self):
        # C4 * empty(3): eigenvalue 0 carries both degenerate branches and the
        # leftover copy eigenvectors: multiplicity 2 + 2 + 8 = 12.
        cd = corona_closed_form(build_family("cycle", 4), build_family("empty", 3))
        by_value = {round(e.value, 6): e for e in cd.entries}
        assert by_value[0.0].multiplicity == 12
        origins = sorted(o.origin for o in by_value[0.0].origins)
        assert origins == ["copy", "zero_minus", "zero_plus"]

    def test_integer_collision_merges(self):
        # K3 * C4: the minus branches of 2 and -1 and the eta=-2 copies all
        # land on eigenvalue -2 (total multiplicity 6).
        cd = corona_closed_form(build_family("complete", 3), build_family("cycle", 4))
        by_value = {round(e.value, 6): e.multiplicity for e in cd.entries}
        assert by_value[-2.0] == 6
        assert by_value[6.0] == 1 and by_value[3.0] == 2 and by_value[0.0] == 6

    def test_exact_annotations(self):
        cd = corona_closed_form(build_family("cycle", 4), build_family("complete", 5))
        rendered = {e.exact.render() for e in cd.entries if e.exact is not None}
        assert "3 + sqrt(21)" in rendered and "1 - sqrt(29)" in rendered

    def test_regularity_required(self):
        with pytest.raises(ValueError):
            corona_closed_form(build_family("cycle", 4), build_family("path", 3))

    def test_wrong_k_rejected(self):
        d1 = eigendecompose(build_family("cycle", 4))
        d2 = eigendecompose(build_family("complete", 5))
        with pytest.raises(ValueError):
            corona_decomposition(d1, d2, k=3)

    def test_eigenvalue_dicts(self):
        cd = corona_closed_form(build_family("cycle", 4), build_family("complete", 5))
        dicts = cd.eigenvalue_dicts()
        assert {"origin", "value", "multiplicity"} == set(dicts[0])
        assert sum(d["multiplicity"] for d in dicts) == 24


class TestApexAmplitude:
    def test_time_zero_identity(self):
        d1 = eigendecompose(build_family("cycle", 4))
        assert apex_amplitude(d1, 4, 5, 0, 0, 0.0) == pytest.approx(1.0)
        assert apex_amplitude(d1, 4, 5, 0, 2, 0.0) == pytest.approx(0.0 + 0j)

    def test_c4_k5_against_numeric(self):
        g1, g2 = build_family("cycle", 4), build_family("complete", 5)
        d1 = eigendecompose(g1)
        dn = eigendecompose(neighborhood_corona(g1, g2))
        closed = apex_amplitude(d1, 4, 5, 0, 2, 1.0)
        numeric = transition_amplitude(dn, 0, 2, 1.0)
        assert abs(closed - numeric) < 1e-9

    def test_pendant_path_matches(self):
        # K2 * empty(1) is the 4-vertex path; its middle vertices are the apexes.
        g1, g2 = build_family("complete", 2), build_family("empty", 1)
        d1 = eigendecompose(g1)
        dn = eigendecompose(neighborhood_corona(g1, g2))
        for t in np.linspace(0.0, 15.0, 40):
            closed = apex_amplitude(d1, 0, 1, 0, 1, float(t))
            numeric = transition_amplitude(dn, 0, 1, float(t))
            assert abs(closed - numeric) < 1e-9

    @pytest.mark.parametrize("spec1,spec2", INSTANCES)
    def test_all_instances_random_times(self, spec1, spec2):
        g1, g2 = build_family(*spec1), build_family(*spec2)
        k = regularity_degree(g2)
        d1 = eigendecompose(g1)
        dn = eigendecompose(neighborhood_corona(g1, g2))
        rng = np.random.RandomState(7)
        for t in rng.uniform(0.0, 40.0, size=100):
            for u in range(g1.n):
                for v in range(g1.n):
                    closed = apex_amplitude(d1, k, g2.n, u, v, float(t))
                    numeric = transition_amplitude(dn, u, v, float(t))
                    assert abs(closed - numeric) < 1e-9


class TestApexSupportExact:
    def test_c4_k3(self):
        supp = {qi(2), qi(0), qi(-2)}
        out = apex_support_exact(supp, 2, 3)
        rendered = {x.render() for x in out}
        assert rendered == {"2 + 2*sqrt(3)", "2 - 2*sqrt(3)", "4", "-4", "0"}

    def test_no_zero(self):
        out = apex_support_exact({qi(1), qi(-1)}, 0, 1)
        assert len(out) == 4 and qi(0) not in out

    def test_requires_integers(self):
        with pytest.raises(ValueError):
            apex_support_exact({Q.from_sqrt(2)}, 0, 1)


class TestExactProjectors:
    def test_c4_k5_exact_completeness(self):
        entries = corona_projectors_exact(
            build_family("cycle", 4), build_family("complete", 5)
        )
        total = sum_exact_projectors(entries)
        zero, one = qi(0), qi(1)
        n = 24
        assert all(
            total[i][j] == (one if i == j else zero) for i in range(n) for j in range(n)
        )

    def test_f0_block_form(self):
        from coronawalk.charpoly import exact_eigenprojector

        c4 = build_family("cycle", 4)
        entries = dict(corona_projectors_exact(c4, build_family("complete", 5)))
        spec1 = exact_spectrum(c4.adjacency)
        f0 = exact_eigenprojector(c4.adjacency, spec1, qi(0))
        F0 = entries[qi(0)]
        zero = qi(0)
        for i in range(24):
            for j in range(24):
                expected = f0[i][j] if i < 4 and j < 4 else zero
                assert F0[i][j] == expected

    def test_exact_matches_float_decomposition(self):
        g1, g2 = build_family("cycle", 4), build_family("empty", 3)
        entries = corona_projectors_exact(g1, g2)
        cd = corona_closed_form(g1, g2)
        floats = {round(e.value, 9): e.projector for e in cd.entries}
        for value, proj in entries:
            ref = floats[round(float(value), 9)]
            got = np.array([[float(x) for x in row] for row in proj])
            assert np.max(np.abs(got - ref)) < 1e-12

    def test_rejects_non_integral(self):
        with pytest.raises(ValueError):
            corona_projectors_exact(build_family("path", 3), build_family("cycle", 3))

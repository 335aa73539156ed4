import numpy as np
import pytest
from hypothesis import given, strategies as st

from meanlab.hpd import DomainError, HpdMatrix, identity, powm
from meanlab.pair_means import (
    bures_wasserstein_distance,
    fidelity,
    inv_sharp,
    metric_geometric,
    spectral_geometric,
    spectral_semimetric,
    thompson_distance,
    wasserstein_mean,
    weighted_arithmetic,
)
from meanlab.samplers import SamplerSpec, random_hpd, random_invertible

from oracles import geomean_np, opnorm_np, powm_np

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
dims = st.integers(min_value=1, max_value=6)

D14 = HpdMatrix(np.diag([1.0, 4.0]))
D916 = HpdMatrix(np.diag([9.0, 16.0]))


def pair(seed, dim, lo=0.2, hi=5.0):
    a = random_hpd(SamplerSpec(seed=seed, dim=dim, spectrum_range=(lo, hi)))
    b = random_hpd(SamplerSpec(seed=seed ^ 0x9E3779B9, dim=dim, spectrum_range=(lo, hi)))
    return a, b


class TestWeightedArithmetic:
    def test_endpoints(self):
        a, b = pair(1, 3)
        assert np.array_equal(weighted_arithmetic(a, b, 0.0).mat, a.mat)
        assert np.array_equal(weighted_arithmetic(a, b, 1.0).mat, b.mat)

    def test_diagonal_midpoint(self):
        out = weighted_arithmetic(D14, D916, 0.5)
        assert np.allclose(out.mat, np.diag([5.0, 10.0]))

    @given(seed=seeds, dim=dims)
    def test_definition(self, seed, dim):
        a, b = pair(seed, dim)
        out = weighted_arithmetic(a, b, 0.5)
        assert opnorm_np(out.mat - 0.5 * (a.mat + b.mat)) == 0.0

    def test_outside_unit_interval_is_hermitian(self):
        a, b = pair(2, 2)
        out = weighted_arithmetic(a, b, 3.0)
        assert not isinstance(out, HpdMatrix) or True  # type depends on t only
        assert type(out).__name__ == "HermitianMatrix"

    def test_dim_mismatch(self):
        with pytest.raises(DomainError):
            weighted_arithmetic(D14, identity(3), 0.5)


class TestMetricGeometric:
    def test_t0_returns_a(self):
        a, b = pair(3, 4)
        out = metric_geometric(a, b, 0.0)
        assert opnorm_np(out.mat - a.mat) <= 1e-11 * opnorm_np(a.mat)

    def test_commuting_diagonal(self):
        out = metric_geometric(D14, D916, 0.5)
        assert np.allclose(out.mat, np.diag([3.0, 8.0]), atol=1e-12)

    @given(seed=seeds, dim=dims)
    def test_riccati_residual(self, seed, dim):
        a, b = pair(seed, dim)
        x = metric_geometric(a, b, 0.5).mat
        resid = opnorm_np(x @ np.linalg.inv(a.mat) @ x - b.mat)
        assert resid <= 1e-9 * opnorm_np(b.mat)

    @given(seed=seeds, dim=dims, t=st.floats(min_value=-1, max_value=2))
    def test_congruence_invariance(self, seed, dim, t):
        a, b = pair(seed, dim)
        m = random_invertible(SamplerSpec(seed=seed ^ 0xC0, dim=dim))
        lhs = m @ metric_geometric(a, b, t).mat @ m.conj().T
        rhs = metric_geometric(
            HpdMatrix(m @ a.mat @ m.conj().T), HpdMatrix(m @ b.mat @ m.conj().T), t
        ).mat
        assert opnorm_np(lhs - rhs) <= 1e-9 * max(1.0, opnorm_np(rhs))

    @given(seed=seeds, dim=dims)
    def test_inv_sharp_cross_validation(self, seed, dim):
        # closed form against the general geodesic evaluated at (A^{-1}, B, 1/2)
        a, b = pair(seed, dim)
        direct = inv_sharp(a, b).mat
        via_geodesic = metric_geometric(powm(a, -1.0), b, 0.5).mat
        assert opnorm_np(direct - via_geodesic) <= 1e-10 * max(1.0, opnorm_np(direct))
        via_lapack = geomean_np(np.linalg.inv(a.mat), b.mat)
        assert opnorm_np(direct - via_lapack) <= 1e-10 * max(1.0, opnorm_np(direct))


class TestSpectralGeometric:
    def test_t1_riccati_forces_b(self):
        a, b = pair(4, 4)
        out = spectral_geometric(a, b, 1.0)
        assert opnorm_np(out.mat - b.mat) <= 1e-10 * opnorm_np(b.mat)

    def test_commuting_matches_metric(self):
        out = spectral_geometric(D14, D916, 0.5)
        assert np.allclose(out.mat, np.diag([3.0, 8.0]), atol=1e-12)

    @given(seed=seeds, dim=st.integers(min_value=2, max_value=6))
    def test_geodesic_property(self, seed, dim):
        a, b = pair(seed, dim)
        s, t = 0.3, 0.8
        lhs = spectral_semimetric(
            spectral_geometric(a, b, s), spectral_geometric(a, b, t)
        )
        assert lhs <= abs(s - t) * spectral_semimetric(a, b) + 1e-9


class TestWasserstein:
    def test_endpoints(self):
        a, b = pair(5, 3)
        for t, ref in ((0.0, a), (1.0, b)):
            out = wasserstein_mean(a, b, t)
            assert opnorm_np(out.mat - ref.mat) <= 1e-11 * opnorm_np(ref.mat)

    def test_commuting_diagonal(self):
        out = wasserstein_mean(D14, D916, 0.5)
        assert np.allclose(out.mat, np.diag([4.0, 9.0]), atol=1e-12)

    @given(seed=seeds, dim=dims, t=st.floats(min_value=0.0, max_value=1.0))
    def test_polynomial_form_agrees(self, seed, dim, t):
        a, b = pair(seed, dim)
        c = inv_sharp(a, b).mat
        poly = (
            (1 - t) ** 2 * a.mat
            + t ** 2 * b.mat
            + t * (1 - t) * (a.mat @ c + c @ a.mat)
        )
        out = wasserstein_mean(a, b, t).mat
        assert opnorm_np(out - poly) <= 1e-10 * max(1.0, opnorm_np(out))

    @given(seed=seeds, dim=dims)
    def test_fixed_point_residual(self, seed, dim):
        a, b = pair(seed, dim)
        t = 0.7
        x = wasserstein_mean(a, b, t)
        xinv = powm(x, -1.0)
        resid = opnorm_np(
            np.eye(dim)
            - (1 - t) * metric_geometric(a, xinv, 0.5).mat
            - t * metric_geometric(b, xinv, 0.5).mat
        )
        assert resid <= 1e-9

    def test_indefinite_factor_rejected(self):
        # at t far outside [0,1] the interpolation factor loses definiteness
        a = HpdMatrix(np.diag([1.0, 1.0]))
        b = HpdMatrix(np.diag([100.0, 100.0]))
        with pytest.raises(DomainError):
            wasserstein_mean(a, b, -1.5)


class TestFidelity:
    def test_identity_first_argument(self):
        b = pair(6, 3)[1]
        out = fidelity(identity(3), b)
        assert opnorm_np(out.mat - powm_np(b.mat, 0.5)) <= 1e-12 * opnorm_np(b.mat)

    def test_diagonal(self):
        assert np.allclose(fidelity(D14, D916).mat, np.diag([3.0, 8.0]), atol=1e-12)

    @given(seed=seeds, dim=dims)
    def test_trace_symmetry(self, seed, dim):
        a, b = pair(seed, dim)
        t1 = np.trace(fidelity(a, b).mat).real
        t2 = np.trace(fidelity(b, a).mat).real
        assert abs(t1 - t2) <= 1e-9 * max(1.0, abs(t1))


class TestDistances:
    def test_thompson_self_zero(self):
        a = pair(7, 4)[0]
        assert thompson_distance(a, a) <= 1e-13

    def test_thompson_exponential_diagonal(self):
        out = thompson_distance(identity(2), HpdMatrix(np.diag([np.e, np.e ** -2])))
        assert abs(out - 2.0) <= 1e-12

    def test_thompson_scalar_oracle(self):
        # max |log(b_i / a_i)| for commuting inputs
        want = max(abs(np.log(9 / 1)), abs(np.log(16 / 4)))
        assert abs(thompson_distance(D14, D916) - want) <= 1e-12

    def test_bures_self_zero(self):
        a = pair(8, 4)[0]
        assert bures_wasserstein_distance(a, a) <= 1e-6

    def test_bures_commuting_oracle(self):
        want = np.sqrt(sum((np.sqrt(x) - np.sqrt(y)) ** 2 for x, y in ((1, 9), (4, 16))))
        assert abs(bures_wasserstein_distance(D14, D916) - want) <= 1e-12

    @given(seed=seeds, dim=dims)
    def test_bures_symmetry(self, seed, dim):
        a, b = pair(seed, dim)
        d1 = bures_wasserstein_distance(a, b)
        d2 = bures_wasserstein_distance(b, a)
        assert abs(d1 - d2) <= 1e-10 * max(1.0, d1)

    def test_semimetric_examples(self):
        a, b = pair(9, 3)
        assert spectral_semimetric(a, a) <= 1e-12
        lam = np.linalg.eigvalsh(b.mat)
        assert abs(
            spectral_semimetric(identity(3), b) - float(np.abs(np.log(lam)).max())
        ) <= 1e-11
        assert abs(spectral_semimetric(D14, D916) - 2 * np.log(3)) <= 1e-12


class TestSharedInvariants:
    @given(seed=seeds, dim=dims)
    def test_commuting_collapse(self, seed, dim):
        # all geodesics coincide with the entrywise power path when inputs commute
        rng = np.random.default_rng(seed)
        lam_a = rng.uniform(0.5, 3.0, dim)
        lam_b = rng.uniform(0.5, 3.0, dim)
        z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        q, _ = np.linalg.qr(z)
        a = HpdMatrix(q @ np.diag(lam_a) @ q.conj().T)
        b = HpdMatrix(q @ np.diag(lam_b) @ q.conj().T)
        t = 0.3
        want = q @ np.diag(lam_a ** (1 - t) * lam_b ** t) @ q.conj().T
        for fn in (metric_geometric, spectral_geometric):
            got = fn(a, b, t).mat
            assert opnorm_np(got - want) <= 1e-10 * max(1.0, opnorm_np(want))

    @given(seed=seeds, dim=dims)
    def test_endpoint_exactness(self, seed, dim):
        a, b = pair(seed, dim)
        for fn in (spectral_geometric, wasserstein_mean):
            assert opnorm_np(fn(a, b, 0.0).mat - a.mat) <= 1e-11 * opnorm_np(a.mat)
            assert opnorm_np(fn(a, b, 1.0).mat - b.mat) <= 1e-11 * opnorm_np(b.mat)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanlab.asymptotics import (
    Curve,
    LimitStudyReport,
    dyadic_order,
    lie_trotter_limit_study,
    qp_le_convergence_study,
    renyi_zero_limit_study,
)
from meanlab.hpd import DomainError, HermitianMatrix, HpdMatrix, identity
from meanlab.multi_means import (
    MatrixTuple,
    WeightVector,
    arithmetic_mean,
    harmonic_mean,
    quasi_arithmetic,
)
from meanlab.samplers import SamplerSpec, random_curve_family, random_tuple, random_weights
from meanlab.pair_means import thompson_distance

from oracles import expm_np, opnorm_np

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)

GRID = (0.02, 0.01, 0.005, 0.0025)


class TestCurve:
    def test_base_point_exact(self):
        c = Curve(HermitianMatrix(np.diag([1.0, -1.0])))
        assert np.array_equal(c.at(0.0).mat, np.eye(2))

    def test_matches_lapack_exponential(self):
        h = np.array([[0.2, 0.1j], [-0.1j, -0.3]])
        c = Curve(HermitianMatrix(h))
        got = c.at(0.7).mat
        assert opnorm_np(got - expm_np(0.7 * h)) <= 1e-13


class TestReportShape:
    def test_grid_must_decrease(self):
        with pytest.raises(DomainError):
            LimitStudyReport(study="x", grid=(0.1, 0.2))
        with pytest.raises(DomainError):
            LimitStudyReport(study="x", grid=(0.1, -0.05))

    def test_series_alignment(self):
        with pytest.raises(DomainError):
            LimitStudyReport(study="x", grid=(0.2, 0.1), values={"e": (1.0,)})

    def test_rows(self):
        rep = LimitStudyReport(study="x", grid=(0.2, 0.1), values={"e": (1.0, 0.5)})
        rows = rep.rows()
        assert [r["grid"] for r in rows] == [0.2, 0.1]
        assert rows[0]["e"] == 1.0

    def test_dyadic_order_skips_noise(self):
        assert np.isnan(dyadic_order((0.2, 0.1), (0.0, 0.0)))
        assert abs(dyadic_order((0.2, 0.1, 0.05), (4.0, 2.0, 1.0)) - 1.0) < 1e-12


class TestLieTrotter:
    def test_zero_generators_zero_error(self):
        curves = [Curve(HermitianMatrix(np.zeros((2, 2)))) for _ in range(2)]
        rep = lie_trotter_limit_study(
            arithmetic_mean, WeightVector((0.5, 0.5)), curves, GRID
        )
        assert max(rep.values["error"]) <= 1e-12
        assert np.isnan(rep.estimated_order)

    def test_cancelling_commuting_generators(self):
        curves = [
            Curve(HermitianMatrix(np.diag([1.0, -1.0]))),
            Curve(HermitianMatrix(np.diag([-1.0, 1.0]))),
        ]
        rep = lie_trotter_limit_study(
            arithmetic_mean, WeightVector((0.5, 0.5)), curves, GRID
        )
        # target is exp(0) = I and the error decays to zero
        errs = rep.values["error"]
        assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))
        assert errs[-1] <= 5e-3

    def test_noncommuting_generators_first_order(self):
        curves = [
            Curve(HermitianMatrix(np.diag([1.0, -1.0]))),
            Curve(HermitianMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))),
        ]
        w = WeightVector((0.5, 0.5))
        for fn in (
            arithmetic_mean,
            harmonic_mean,
            lambda w_, a_: quasi_arithmetic(0.5, w_, a_),
            lambda w_, a_: quasi_arithmetic(-0.5, w_, a_),
        ):
            rep = lie_trotter_limit_study(fn, w, curves, GRID)
            errs = rep.values["error"]
            assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))
            assert 0.7 <= rep.estimated_order <= 1.3

    @given(seed=seeds)
    @settings(max_examples=5)
    def test_error_sandwich_between_arithmetic_and_harmonic(self, seed):
        spec = SamplerSpec(seed=seed, dim=3)
        curves = random_curve_family(spec, 3)
        w = random_weights(spec, 3)
        errs = {}
        for name, fn in (
            ("a", arithmetic_mean),
            ("h", harmonic_mean),
            ("q", lambda w_, a_: quasi_arithmetic(0.5, w_, a_)),
        ):
            errs[name] = lie_trotter_limit_study(fn, w, curves, GRID).values["error"]
        for i in range(len(GRID)):
            assert errs["q"][i] <= max(errs["a"][i], errs["h"][i]) + 1e-6

    def test_two_sided_option(self):
        spec = SamplerSpec(seed=5, dim=2)
        curves = random_curve_family(spec, 2)
        w = random_weights(spec, 2)
        rep = lie_trotter_limit_study(
            arithmetic_mean, w, curves, GRID, include_negative=True
        )
        assert "error_negative_side" in rep.values
        assert 0.7 <= rep.estimated_order <= 1.3

    def test_rejects_grid_outside_unit_interval(self):
        curves = random_curve_family(SamplerSpec(seed=1, dim=2), 2)
        with pytest.raises(DomainError):
            lie_trotter_limit_study(
                arithmetic_mean, WeightVector((0.5, 0.5)), curves, (2.0, 1.0)
            )


class TestRenyiZero:
    def test_commuting_tuple_margins_nonnegative(self):
        spec = SamplerSpec(seed=7, dim=3, spectrum_range=(0.2, 1.0))
        from meanlab.samplers import random_commuting_family

        a = random_commuting_family(spec, 3)
        w = random_weights(spec, 3)
        rep = renyi_zero_limit_study(0.4, 0.9, w, a, (0.2, 0.1, 0.05))
        for series in rep.verdicts.values():
            for v in series:
                assert v.margin >= -1e-9

    def test_contracting_tuple_bounds(self):
        spec = SamplerSpec(seed=8, dim=3, spectrum_range=(0.1, 1.0))
        a = random_tuple(spec, 3)
        w = random_weights(spec, 3)
        rep = renyi_zero_limit_study(0.4, 0.9, w, a, (0.2, 0.1, 0.05))
        assert set(rep.verdicts) == {
            "negative-side-below-positive-side",
            "positive-side-below-power-mean",
        }
        for series in rep.verdicts.values():
            assert all(v.holds for v in series)

    def test_constant_tuple_exact(self):
        # idempotency pins both one-sided values at x itself, so the
        # two-sided pairing margin vanishes; the power-mean bound margin is
        # (lambda_max x)^{-t/2} - 1 >= 0 and the distance to the limit
        # bound is t * ||log x||
        x = random_tuple(SamplerSpec(seed=9, dim=3, spectrum_range=(0.2, 0.9)), 1).items[0]
        a = MatrixTuple((x, x))
        w = WeightVector((0.5, 0.5))
        t = 0.4
        rep = renyi_zero_limit_study(t, 0.9, w, a, (0.2, 0.1))
        for v in rep.verdicts["negative-side-below-positive-side"]:
            assert abs(v.margin) <= 1e-9
        lam_max = float(np.linalg.eigvalsh(x.mat)[-1])
        want = lam_max ** (-t / 2) - 1.0
        for v in rep.verdicts["positive-side-below-power-mean"]:
            assert v.holds and abs(v.margin - want) <= 1e-9
        want_dist = t * float(np.abs(np.log(np.linalg.eigvalsh(x.mat))).max())
        for d in rep.values["distance_to_le_bound"]:
            assert abs(d - want_dist) <= 1e-9

    def test_mixed_spectrum_rejected(self):
        spec = SamplerSpec(seed=10, dim=3, spectrum_range=(0.5, 2.0))
        a = random_tuple(spec, 3)
        w = random_weights(spec, 3)
        with pytest.raises(DomainError):
            renyi_zero_limit_study(0.4, 0.9, w, a, (0.2, 0.1))


class TestQpLe:
    @given(seed=seeds)
    @settings(max_examples=8)
    def test_random_tuple_verdicts_and_rate(self, seed):
        spec = SamplerSpec(seed=seed, dim=3)
        a = random_tuple(spec, 3)
        w = random_weights(spec, 3)
        rep = qp_le_convergence_study(w, a, (0.5, 0.25, 0.125, 0.0625))
        for name in ("le-below-qp", "qnegp-below-le"):
            assert all(v.margin >= -1e-8 for v in rep.verdicts[name])
        assert all(
            v is None or v.margin >= -1e-8 for v in rep.verdicts["qp-monotone-in-p"]
        )
        dist = rep.values["distance_to_le"]
        assert all(d1 > d2 for d1, d2 in zip(dist, dist[1:]))
        if dist[-1] > 1e-9:
            assert 0.68 <= rep.estimated_order <= 1.32

    def test_constant_tuple_everything_zero(self):
        x = random_tuple(SamplerSpec(seed=12, dim=3), 1).items[0]
        a = MatrixTuple((x, x, x))
        w = WeightVector((0.2, 0.5, 0.3))
        rep = qp_le_convergence_study(w, a, (0.5, 0.25))
        assert max(rep.values["distance_to_le"]) <= 1e-11
        for series in rep.verdicts.values():
            for v in series:
                if v is not None:
                    assert abs(v.margin) <= 1e-10

import json
import os

import numpy as np
import pytest

from meanlab.orders import ToleranceProfile
from meanlab.samplers import SamplerSpec
from meanlab.suites import (
    SUITES,
    conjecture_search_le_omega,
    replay_conjecture_trial,
    run_verification_suite,
)

TOL = ToleranceProfile(psd_margin=1e-8)

REGISTRY = {
    "thompson-lemma",
    "equivalence-7way",
    "mono-sp-wass",
    "in-betweenness",
    "near-sp-wass",
    "fidelity-recursion",
    "relation-chain",
    "kim18-chain",
    "mono-variables",
    "mono-parameters",
    "mixed-chain",
    "renyi-properties",
    "renyi-logdet",
    "renyi-quasi",
    "renyi-le",
    "le-near",
    "lie-trotter",
    "cartan-le-wass",
}


class TestRegistry:
    def test_registry_names(self):
        assert set(SUITES) == REGISTRY

    def test_every_suite_documented(self):
        for name, sdef in SUITES.items():
            assert sdef.summary and len(sdef.summary) > 20, name

    def test_readme_table_in_sync(self):
        readme = os.path.join(os.path.dirname(__file__), "..", "README.md")
        with open(readme, encoding="utf-8") as fp:
            text = fp.read()
        for name in SUITES:
            assert f"`{name}`" in text, f"suite {name} missing from README table"

    def test_unknown_suite_rejected(self):
        with pytest.raises(KeyError):
            run_verification_suite("nope", SamplerSpec(seed=0, dim=2, count=1), TOL)


class TestSmallRuns:
    @pytest.mark.parametrize("name", sorted(REGISTRY))
    def test_suite_passes(self, name):
        spec = SamplerSpec(seed=1234, dim=8, count=8)
        rep = run_verification_suite(name, spec, TOL)
        failing = [r.to_dict() for r in rep.properties if r.failures]
        assert rep.passed(), failing
        assert rep.trials == 8
        for rec in rep.properties:
            assert rec.trials > 0
            assert rec.worst_margin != float("inf")

    def test_determinism_byte_identical(self):
        spec = SamplerSpec(seed=77, dim=6, count=10)
        r1 = run_verification_suite("relation-chain", spec, TOL)
        r2 = run_verification_suite("relation-chain", spec, TOL)
        assert r1.canonical_json() == r2.canonical_json()
        # timing may differ; the full document without timing must not
        d1 = json.loads(r1.full_json())
        d2 = json.loads(r2.full_json())
        d1.pop("timing")
        d2.pop("timing")
        assert d1 == d2

    def test_different_seed_changes_body(self):
        r1 = run_verification_suite(
            "le-near", SamplerSpec(seed=1, dim=4, count=5), TOL
        )
        r2 = run_verification_suite(
            "le-near", SamplerSpec(seed=2, dim=4, count=5), TOL
        )
        assert r1.canonical_json() != r2.canonical_json()

    def test_dims_argument_respected(self):
        rep = run_verification_suite(
            "le-near", SamplerSpec(seed=3, dim=4, count=4), TOL, dims=(2, 3)
        )
        assert rep.dims == (2, 3)


class TestConjecture:
    def test_search_reports_margin(self):
        rep = conjecture_search_le_omega(
            SamplerSpec(seed=11, dim=4, count=12), n_range=(2, 4), tol=TOL
        )
        (prop,) = rep.properties
        assert prop.name == "le-below-barycenter"
        assert prop.trials == 12
        assert prop.worst_margin != float("inf")

    def test_dump_and_replay(self, tmp_path):
        rep = conjecture_search_le_omega(
            SamplerSpec(seed=13, dim=3, count=4),
            n_range=(2, 3),
            tol=TOL,
            dump_dir=str(tmp_path),
            dump_below=10.0,  # force every trial to dump
        )
        assert len(rep.counterexamples) == 4
        for path in rep.counterexamples:
            result = replay_conjecture_trial(path)
            assert abs(result["margin"] - result["recorded_margin"]) <= 1e-10

    def test_no_dump_without_dir(self):
        rep = conjecture_search_le_omega(
            SamplerSpec(seed=14, dim=3, count=3), n_range=(2, 3), tol=TOL
        )
        assert rep.counterexamples == []

    def test_bad_n_range(self):
        with pytest.raises(ValueError):
            conjecture_search_le_omega(
                SamplerSpec(seed=15, dim=3, count=2), n_range=(1, 9), tol=TOL
            )

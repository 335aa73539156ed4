"""Suite reports: per-property tallies with worst margins and witnesses.

A report body is deterministic for a given (suite, spec, tolerance): the
wall-clock timing lives in a separate section that the canonical
serialization omits, so replays with the same seed compare byte-equal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

REPORT_SCHEMA = "meanlab-report/1"


@dataclass
class PropertyRecord:
    """Tally of one named property across the trials of a suite run."""

    name: str
    trials: int = 0
    failures: int = 0
    worst_margin: float = float("inf")
    witness: str | None = None

    def to_dict(self) -> dict:
        worst = None if self.worst_margin == float("inf") else self.worst_margin
        return {
            "name": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "worst_margin": worst,
            "witness": self.witness,
        }


@dataclass
class SuiteReport:
    """Persisted record of one verification suite run."""

    suite: str
    seed: int
    trials: int
    dims: tuple[int, int]
    spectrum_range: tuple[float, float]
    tolerance: dict
    solver: dict
    library_version: str
    properties: list[PropertyRecord] = field(default_factory=list)
    skipped: int = 0
    numerical_failures: int = 0
    notes: list[str] = field(default_factory=list)
    counterexamples: list[str] = field(default_factory=list)
    wall_seconds: float = 0.0

    @property
    def failures(self) -> int:
        return sum(rec.failures for rec in self.properties)

    def passed(self) -> bool:
        return self.failures == 0 and self.numerical_failures == 0

    def body(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "dims": list(self.dims),
            "spectrum_range": list(self.spectrum_range),
            "tolerance": self.tolerance,
            "solver": self.solver,
            "library_version": self.library_version,
            "properties": [rec.to_dict() for rec in self.properties],
            "failures": self.failures,
            "skipped": self.skipped,
            "numerical_failures": self.numerical_failures,
            "notes": self.notes,
            "counterexamples": self.counterexamples,
        }

    def canonical_json(self) -> str:
        """Deterministic body serialization; excludes timing."""
        return json.dumps(self.body(), sort_keys=True, indent=2) + "\n"

    def full_json(self) -> str:
        doc = self.body()
        doc["timing"] = {"wall_seconds": self.wall_seconds}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_report(path, report: SuiteReport) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(report.full_json())

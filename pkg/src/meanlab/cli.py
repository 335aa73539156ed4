"""Command-line front end.

Subcommands: ``mean`` (evaluate a named mean of matrix files), ``order``
(profile the relation chain of two matrices), ``verify`` (run a named
suite), ``limits`` (run a limit study and write CSV), ``conjecture``
(search for violations of the open log-Euclidean/barycenter question).

Exit codes: 0 all properties pass, 1 a property failed (report written),
2 usage error, 3 numerical failure.  No environment variables are read;
everything is a flag.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from . import __version__
from .asymptotics import (
    lie_trotter_limit_study,
    qp_le_convergence_study,
    renyi_zero_limit_study,
)
from .hpd import DomainError, NumericalFailure, as_hpd
from .matrixio import MatrixFileError, read_matrix, write_matrix
from .multi_means import (
    MEAN_KINDS,
    MatrixTuple,
    SolverConfig,
    WeightVector,
    make_mean,
)
from .orders import ToleranceProfile, relation_profile
from .pair_means import (
    fidelity,
    metric_geometric,
    spectral_geometric,
    wasserstein_mean,
)
from .report import write_report
from .samplers import SamplerSpec, random_curve_family, random_tuple, random_weights
from .suites import (
    SUITES,
    conjecture_search_le_omega,
    replay_conjecture_trial,
    run_verification_suite,
)

EXIT_OK = 0
EXIT_PROPERTY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

PAIR_KINDS = ("geometric", "spectral-geometric", "wasserstein", "fidelity")


class UsageError(Exception):
    pass


def _parse_range(text: str, kind=int):
    parts = text.split("..")
    if len(parts) != 2:
        raise UsageError(f"expected LO..HI, got {text!r}")
    try:
        lo, hi = kind(parts[0]), kind(parts[1])
    except ValueError:
        raise UsageError(f"expected numeric LO..HI, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def _parse_weights(text: str | None, n: int) -> WeightVector:
    if text is None:
        return WeightVector.uniform(n)
    try:
        ws = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"weights must be comma-separated reals, got {text!r}") from None
    if len(ws) != n:
        raise UsageError(f"{len(ws)} weights for {n} matrices")
    return WeightVector(ws)


def _parse_grid(text: str):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"grid must be comma-separated reals, got {text!r}") from None


def _load_hpd(path):
    h, _ = read_matrix(path, require_hpd=True)
    return h


def _cmd_mean(args) -> int:
    mats = [_load_hpd(p) for p in args.files]
    dims = {m.dim for m in mats}
    if len(dims) != 1:
        raise UsageError(f"input dimensions differ: {sorted(dims)}")
    kind = args.kind
    if kind in PAIR_KINDS:
        if len(mats) != 2:
            raise UsageError(f"{kind} takes exactly two matrices, got {len(mats)}")
        a, b = mats
        if kind == "fidelity":
            out = fidelity(a, b)
        else:
            t = 0.5 if args.t is None else args.t
            fn = {
                "geometric": metric_geometric,
                "spectral-geometric": spectral_geometric,
                "wasserstein": wasserstein_mean,
            }[kind]
            out = fn(a, b, t)
    elif kind in MEAN_KINDS:
        w = _parse_weights(args.weights, len(mats))
        cfg = SolverConfig(residual_tol=args.solver_tol, max_iter=args.max_iter)
        fn = make_mean(kind, p=args.p, t=args.t, z=args.z, cfg=cfg)
        out = fn(w, MatrixTuple(tuple(mats)))
    else:
        raise UsageError(
            f"unknown mean kind {kind!r}; pair kinds: {', '.join(PAIR_KINDS)}; "
            f"tuple kinds: {', '.join(MEAN_KINDS)}"
        )
    write_matrix(args.output, as_hpd(out), label=f"{kind} mean of {len(mats)} matrices")
    return EXIT_OK


def _cmd_order(args) -> int:
    a = _load_hpd(args.a)
    b = _load_hpd(args.b)
    if a.dim != b.dim:
        raise UsageError(f"dimension mismatch: {a.dim} vs {b.dim}")
    tol = ToleranceProfile(psd_margin=args.tol)
    profile = relation_profile(a, b, tol)
    doc = {
        "schema": "meanlab-order/1",
        "tolerance": {"psd_margin": tol.psd_margin, "rel_scale": tol.rel_scale},
        "profile": profile.as_dict(),
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(
            f"unknown suite {args.suite!r}; known: {', '.join(sorted(SUITES))}"
        )
    dims = _parse_range(args.dims) if args.dims else None
    spectrum = _parse_range(args.spectrum, float) if args.spectrum else (0.2, 5.0)
    spec = SamplerSpec(
        seed=args.seed,
        dim=dims[1] if dims else 8,
        spectrum_range=spectrum,
        count=args.trials,
    )
    tol = ToleranceProfile(psd_margin=args.tol)
    solver = SolverConfig(residual_tol=args.solver_tol, max_iter=args.max_iter)
    report = run_verification_suite(args.suite, spec, tol, dims=dims, solver=solver)
    if args.output:
        write_report(args.output, report)
    else:
        sys.stdout.write(report.full_json())
    if report.numerical_failures:
        return EXIT_NUMERICAL
    if report.failures:
        return EXIT_PROPERTY_FAILED
    return EXIT_OK


def _cmd_limits(args) -> int:
    spec = SamplerSpec(seed=args.seed, dim=args.dim, count=1)
    n = args.n
    w = random_weights(spec, n)
    if args.study == "lie-trotter":
        curves = random_curve_family(spec, n)
        grid = _parse_grid(args.grid) if args.grid else (0.02, 0.01, 0.005, 0.0025)
        fn = make_mean(args.mean, p=args.p, t=args.t, z=args.z)
        report = lie_trotter_limit_study(fn, w, curves, grid, mean_name=args.mean)
    elif args.study == "renyi-zero":
        if args.t is None or args.z is None:
            raise UsageError("renyi-zero needs --t and --z")
        spectrum = (
            _parse_range(args.spectrum, float) if args.spectrum else (0.1, 1.0)
        )
        a = random_tuple(
            SamplerSpec(seed=args.seed, dim=args.dim, spectrum_range=spectrum), n
        )
        grid = _parse_grid(args.grid) if args.grid else (0.2, 0.1, 0.05)
        report = renyi_zero_limit_study(args.t, args.z, w, a, grid)
    elif args.study == "qp-le":
        spectrum = (
            _parse_range(args.spectrum, float) if args.spectrum else (0.2, 5.0)
        )
        a = random_tuple(
            SamplerSpec(seed=args.seed, dim=args.dim, spectrum_range=spectrum), n
        )
        grid = _parse_grid(args.grid) if args.grid else (0.5, 0.25, 0.125, 0.0625)
        report = qp_le_convergence_study(w, a, grid)
    else:
        raise UsageError(f"unknown study {args.study!r}")
    rows = report.rows()
    fieldnames = list(rows[0].keys())
    with open(args.output, "w", newline="", encoding="utf-8") as fp:
        writer = csv.DictWriter(fp, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


def _cmd_conjecture(args) -> int:
    if args.replay:
        result = replay_conjecture_trial(args.replay)
        sys.stdout.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    dims = _parse_range(args.dims) if args.dims else (2, 6)
    n_range = _parse_range(args.n_range) if args.n_range else (2, 6)
    spec = SamplerSpec(seed=args.seed, dim=dims[1], count=args.trials)
    tol = ToleranceProfile(psd_margin=args.tol)
    report = conjecture_search_le_omega(
        spec, n_range=n_range, tol=tol, dims=dims,
        dump_dir=args.dump_dir, dump_below=args.dump_below,
    )
    if args.output:
        write_report(args.output, report)
    else:
        sys.stdout.write(report.full_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="meanlab",
        description="Means, metrics and order relations on HPD matrices.",
    )
    top.add_argument("--version", action="version", version=f"meanlab {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mean", help="evaluate a named mean of matrix files")
    p.add_argument("--kind", required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--z", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--weights", default=None)
    p.add_argument("--solver-tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_mean)

    p = sub.add_parser("order", help="profile the relation chain of two matrices")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=_cmd_order)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--dims", default=None, help="LO..HI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--solver-tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--spectrum", default=None, help="LO..HI eigenvalue range")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("limits", help="run a limit study, write CSV")
    p.add_argument("--study", required=True,
                   choices=("lie-trotter", "renyi-zero", "qp-le"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mean", default="arithmetic")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--z", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--grid", default=None, help="comma-separated decreasing values")
    p.add_argument("--spectrum", default=None, help="LO..HI eigenvalue range")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_limits)

    p = sub.add_parser("conjecture", help="search the open question, or replay a dump")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", default=None, help="LO..HI")
    p.add_argument("--n-range", default=None, help="LO..HI tuple sizes")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--dump-dir", default=None)
    p.add_argument("--dump-below", type=float, default=None)
    p.add_argument("--replay", default=None, help="replay a dumped trial directory")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=_cmd_conjecture)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except (UsageError, MatrixFileError) as exc:
        print(f"meanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"meanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"meanlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

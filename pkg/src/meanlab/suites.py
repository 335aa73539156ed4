"""Named verification suites: seeded, tolerance-controlled property runs.

Each suite turns one inequality (or family of inequalities) about matrix
means into a batch of randomized trials with signed margins, producing a
deterministic :class:`~meanlab.report.SuiteReport`.  The registry below is
the single source of suite names for the CLI; the summary strings double
as the documentation table in the README.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .asymptotics import dyadic_order, renyi_zero_limit_study
from .hpd import (
    HermitianMatrix,
    HpdMatrix,
    NumericalFailure,
    _eigh,
    _sym,
    expm,
    identity,
    log_det,
    operator_norm,
    powm,
)
from .matrixio import read_matrix, write_matrix
from .multi_means import (
    MatrixTuple,
    SolverConfig,
    WeightVector,
    arithmetic_mean,
    harmonic_mean,
    karcher_mean,
    karcher_residual,
    barycenter_residual,
    log_euclidean,
    quasi_arithmetic,
    renyi_power_mean,
    renyi_residual,
    wasserstein_barycenter,
)
from .orders import (
    OrderVerdict,
    ToleranceProfile,
    chain_consistency_slack,
    iff_consistency_slack,
    loewner_cmp,
    near_order_cmp,
    relation_profile,
    weak_log_majorization_cmp,
)
from .pair_means import (
    fidelity,
    inv_sharp,
    metric_geometric,
    spectral_geometric,
    thompson_distance,
    wasserstein_mean,
)
from .report import PropertyRecord, SuiteReport
from .samplers import (
    SamplerSpec,
    derive_seed,
    random_chaotic_pair,
    random_commuting_family,
    random_commuting_loewner_pair,
    random_curve_family,
    random_hpd,
    random_invertible,
    random_loewner_pair,
    random_near_ordered_pair,
    random_tuple,
    random_unitary,
    random_weights,
)


class Recorder:
    """Accumulates per-property tallies across the trials of one run."""

    def __init__(self):
        self.records: dict[str, PropertyRecord] = {}
        self.skipped = 0
        self.numerical_failures = 0
        self.notes: list[str] = []

    def _rec(self, name: str) -> PropertyRecord:
        if name not in self.records:
            self.records[name] = PropertyRecord(name=name)
        return self.records[name]

    def check(self, name: str, margin: float, tol: float, trial: int, witness: str = ""):
        rec = self._rec(name)
        rec.trials += 1
        margin = float(margin)
        holds = margin >= -tol
        if not holds:
            rec.failures += 1
        if margin < rec.worst_margin:
            rec.worst_margin = margin
            rec.witness = f"trial {trial}: {witness}" if witness else f"trial {trial}"
        return holds

    def verdict(self, name: str, v: OrderVerdict, trial: int):
        rec = self._rec(name)
        rec.trials += 1
        if not v.holds:
            rec.failures += 1
        if v.margin < rec.worst_margin:
            rec.worst_margin = v.margin
            rec.witness = f"trial {trial}: {v.witness}"
        return v.holds

    def note(self, text: str):
        self.notes.append(text)


@dataclass
class SuiteContext:
    suite: str
    spec: SamplerSpec
    tol: ToleranceProfile
    dims: tuple[int, int]
    n_range: tuple[int, int]
    solver: SolverConfig
    rec: Recorder

    @property
    def trials(self) -> int:
        return self.spec.count

    def pick(self, trial: int, label: str, lo: int, hi: int) -> int:
        return lo + derive_seed(self.spec.seed, self.suite, label, trial) % (hi - lo + 1)

    def tspec(self, trial: int, label: str = "", dim: int | None = None,
              spectrum: tuple[float, float] | None = None) -> SamplerSpec:
        if dim is None:
            dim = self.pick(trial, f"dim/{label}", *self.dims)
        return SamplerSpec(
            seed=derive_seed(self.spec.seed, self.suite, label, trial),
            dim=dim,
            spectrum_range=spectrum or self.spec.spectrum_range,
            count=1,
        )

    def tuple_and_weights(self, trial: int, label: str = "tuple",
                          spectrum=None, commuting=False):
        n = self.pick(trial, f"n/{label}", *self.n_range)
        spec = self.tspec(trial, label, spectrum=spectrum)
        a = (
            random_commuting_family(spec, n)
            if commuting
            else random_tuple(spec, n)
        )
        w = random_weights(self.tspec(trial, f"w/{label}", dim=spec.dim), n)
        return w, a

    def scale(self, *mats: HpdMatrix) -> float:
        return self.tol.effective(*(operator_norm(m) for m in mats))


def _rel_err(x: HpdMatrix, y: HpdMatrix) -> float:
    diff = float(np.linalg.norm(x.mat - y.mat, 2))
    return diff / max(1.0, float(np.linalg.norm(y.mat, 2)))


# ---------------------------------------------------------------------------
# suite runners


def _run_thompson_lemma(ctx: SuiteContext):
    for trial in range(ctx.trials):
        a = random_hpd(ctx.tspec(trial, "a"))
        b = random_hpd(ctx.tspec(trial, "b", dim=a.dim))
        c = random_hpd(ctx.tspec(trial, "c", dim=a.dim))
        d = random_hpd(ctx.tspec(trial, "d", dim=a.dim))
        m = random_invertible(ctx.tspec(trial, "m", dim=a.dim))
        t = ctx.pick(trial, "t", 0, 1000) / 1000.0
        s = ctx.pick(trial, "s", 0, 1000) / 1000.0
        dab = thompson_distance(a, b)
        ctx.rec.check(
            "inversion-invariance",
            -abs(dab - thompson_distance(powm(a, -1.0), powm(b, -1.0))),
            1e-9, trial, f"d = {dab:.6e}",
        )
        mam = HpdMatrix(m @ a.mat @ m.conj().T)
        mbm = HpdMatrix(m @ b.mat @ m.conj().T)
        ctx.rec.check(
            "congruence-invariance",
            -abs(dab - thompson_distance(mam, mbm)),
            1e-9, trial, f"d = {dab:.6e}",
        )
        lhs = thompson_distance(HpdMatrix(a.mat + b.mat), HpdMatrix(c.mat + d.mat))
        rhs = max(thompson_distance(a, c), thompson_distance(b, d))
        ctx.rec.check("sum-contraction", rhs - lhs, 1e-10, trial,
                      f"lhs = {lhs:.6e}, rhs = {rhs:.6e}")
        lhs = thompson_distance(powm(a, t), powm(b, t))
        ctx.rec.check("power-contraction", t * dab - lhs, 1e-10, trial,
                      f"t = {t}, lhs = {lhs:.6e}")
        lhs = thompson_distance(metric_geometric(a, b, s), metric_geometric(c, d, t))
        rhs = (
            (1 - t) * thompson_distance(a, c)
            + t * thompson_distance(b, d)
            + abs(s - t) * thompson_distance(c, d)
        )
        ctx.rec.check("geodesic-convexity", rhs - lhs, 1e-9, trial,
                      f"s = {s}, t = {t}")


def _seven_margins(a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile) -> list[float]:
    m1 = near_order_cmp(a, b, tol).margin
    lam_c, _ = _eigh(inv_sharp(a, b).mat)
    m2 = float(lam_c[0]) - 1.0
    lam_d, _ = _eigh(metric_geometric(a, powm(b, -1.0), 0.5).mat)
    m3 = 1.0 - float(lam_d[-1])
    sp = spectral_geometric(a, b, 0.5)
    ws = wasserstein_mean(a, b, 0.5)
    m4 = near_order_cmp(a, sp, tol).margin
    m5 = near_order_cmp(sp, b, tol).margin
    m6 = near_order_cmp(a, ws, tol).margin
    m7 = near_order_cmp(ws, b, tol).margin
    return [m1, m2, m3, m4, m5, m6, m7]


def _run_equivalence_7way(ctx: SuiteContext):
    for trial in range(ctx.trials):
        if trial % 2 == 0:
            a = random_hpd(ctx.tspec(trial, "a"))
            b = random_hpd(ctx.tspec(trial, "b", dim=a.dim))
        else:
            a, b = random_near_ordered_pair(ctx.tspec(trial, "pair"))
        margins = _seven_margins(a, b, ctx.tol)
        tol_eff = ctx.scale(a, b)
        slack = iff_consistency_slack(min(margins), max(margins), tol_eff)
        ctx.rec.check(
            "seven-conditions-agree", slack, 0.0, trial,
            "margins: " + ", ".join(f"{m:.3e}" for m in margins),
        )


_SP_WASS_GRID = (-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5)


def _wass_or_none(a, b, t):
    try:
        return wasserstein_mean(a, b, t)
    except Exception:
        return None


def _run_mono_sp_wass(ctx: SuiteContext):
    half = ctx.trials // 2
    for trial in range(half):
        a, b = random_near_ordered_pair(ctx.tspec(trial, "fwd"))
        sp = {t: spectral_geometric(a, b, t) for t in _SP_WASS_GRID}
        ws = {t: _wass_or_none(a, b, t) for t in _SP_WASS_GRID}
        for i, s in enumerate(_SP_WASS_GRID):
            for t in _SP_WASS_GRID[i + 1:]:
                ctx.rec.verdict(
                    "forward-spectral", near_order_cmp(sp[s], sp[t], ctx.tol), trial
                )
                if ws[s] is None or ws[t] is None:
                    ctx.rec.skipped += 1
                    continue
                ctx.rec.verdict(
                    "forward-wasserstein", near_order_cmp(ws[s], ws[t], ctx.tol), trial
                )
    pairs = ((0.0, 0.5), (0.25, 0.75), (0.5, 1.0), (-0.5, 1.5))
    for trial in range(half, ctx.trials):
        a = random_hpd(ctx.tspec(trial, "rev-a"))
        b = random_hpd(ctx.tspec(trial, "rev-b", dim=a.dim))
        m0 = near_order_cmp(a, b, ctx.tol).margin
        tol_eff = ctx.scale(a, b)
        for s, t in pairs:
            ms = near_order_cmp(
                spectral_geometric(a, b, s), spectral_geometric(a, b, t), ctx.tol
            ).margin
            ctx.rec.check(
                "reverse-spectral-iff",
                iff_consistency_slack(m0, ms, tol_eff), 0.0, trial,
                f"near margin {m0:.3e}, link margin {ms:.3e} at (s,t)=({s},{t})",
            )
            wa, wb = _wass_or_none(a, b, s), _wass_or_none(a, b, t)
            if wa is None or wb is None:
                ctx.rec.skipped += 1
                continue
            mw = near_order_cmp(wa, wb, ctx.tol).margin
            ctx.rec.check(
                "reverse-wasserstein-iff",
                iff_consistency_slack(m0, mw, tol_eff), 0.0, trial,
                f"near margin {m0:.3e}, link margin {mw:.3e} at (s,t)=({s},{t})",
            )


def _run_in_betweenness(ctx: SuiteContext):
    for trial in range(ctx.trials):
        a, b = random_near_ordered_pair(ctx.tspec(trial, "pair"))
        for t in (0.25, 0.5, 0.75):
            sp = spectral_geometric(a, b, t)
            ws = wasserstein_mean(a, b, t)
            ctx.rec.verdict("a-below-spectral", near_order_cmp(a, sp, ctx.tol), trial)
            ctx.rec.verdict("spectral-below-b", near_order_cmp(sp, b, ctx.tol), trial)
            ctx.rec.verdict("a-below-wasserstein", near_order_cmp(a, ws, ctx.tol), trial)
            ctx.rec.verdict("wasserstein-below-b", near_order_cmp(ws, b, ctx.tol), trial)


def _run_near_sp_wass(ctx: SuiteContext):
    for trial in range(ctx.trials):
        a = random_hpd(ctx.tspec(trial, "a"))
        b = random_hpd(ctx.tspec(trial, "b", dim=a.dim))
        for t in (0.1, 0.3, 0.5, 0.7, 0.9):
            sp = spectral_geometric(a, b, t)
            ws = wasserstein_mean(a, b, t)
            ctx.rec.verdict(
                "spectral-below-wasserstein", near_order_cmp(sp, ws, ctx.tol), trial
            )
        ah = powm(a, 0.5)
        for t in (0.25, 0.5, 0.75):
            lhs = HpdMatrix(ah.mat @ spectral_geometric(a, b, t).mat @ ah.mat)
            rhs = HpdMatrix(ah.mat @ wasserstein_mean(a, b, t).mat @ ah.mat)
            ctx.rec.verdict(
                "congruence-by-root-preserves-order",
                near_order_cmp(lhs, rhs, ctx.tol), trial,
            )
        la, lb = random_loewner_pair(ctx.tspec(trial, "loewner"))
        w = wasserstein_mean(powm(la, -1.0), lb, 0.5)
        lam, _ = _eigh(w.mat)
        ctx.rec.check(
            "loewner-pair-inverse-midpoint-above-identity",
            float(lam[0]) - 1.0, ctx.scale(la, lb), trial,
            f"lambda_min(A^-1 <> B) - 1 = {float(lam[0]) - 1.0:.6e}",
        )


def _run_fidelity_recursion(ctx: SuiteContext):
    hi = max(ctx.spec.spectrum_range[1], 1.5)
    lo = min(ctx.spec.spectrum_range[0], 0.9)
    for trial in range(ctx.trials):
        if trial % 2 == 0:
            a, b = random_commuting_loewner_pair(
                ctx.tspec(trial, "commuting", spectrum=(1.0, hi))
            )
        else:
            a = random_hpd(ctx.tspec(trial, "a"))
            b = random_hpd(ctx.tspec(trial, "b", dim=a.dim, spectrum=(1.0, hi)))
        hyp = near_order_cmp(powm(a, 0.5), fidelity(a, b), ctx.tol)
        ctx.rec.verdict("first-argument-hypothesis", hyp, trial)
        if hyp.holds:
            for n in (1, 2, 3):
                v = near_order_cmp(
                    powm(a, float(2 ** (n - 1))),
                    fidelity(powm(a, float(2 ** n)), b), ctx.tol,
                )
                ctx.rec.verdict("first-argument-recursion", v, trial)
        else:
            ctx.rec.skipped += 1
        if trial % 2 == 0:
            aa, bb = random_commuting_loewner_pair(
                ctx.tspec(trial, "commuting-dual", spectrum=(lo / 2, 1.0))
            )
        else:
            aa = random_hpd(ctx.tspec(trial, "dual-a", spectrum=(lo / 2, 1.0)))
            bb = random_hpd(ctx.tspec(trial, "dual-b", dim=aa.dim))
        hyp = near_order_cmp(fidelity(bb, aa), powm(bb, 0.5), ctx.tol)
        ctx.rec.verdict("second-argument-hypothesis", hyp, trial)
        if hyp.holds:
            for n in (1, 2, 3):
                v = near_order_cmp(
                    fidelity(powm(bb, float(2 ** n)), aa),
                    powm(bb, float(2 ** (n - 1))), ctx.tol,
                )
                ctx.rec.verdict("second-argument-recursion", v, trial)
        else:
            ctx.rec.skipped += 1


_CHAIN_LINKS = (
    ("loewner", "chaotic"),
    ("chaotic", "near"),
    ("near", "eigen_entrywise"),
    ("eigen_entrywise", "weak_log_major"),
)


def _run_relation_chain(ctx: SuiteContext):
    strict_gap = 0
    for trial in range(ctx.trials):
        kind = trial % 4
        if kind == 0:
            a = random_hpd(ctx.tspec(trial, "a"))
            b = random_hpd(ctx.tspec(trial, "b", dim=a.dim))
        elif kind == 1:
            a, b = random_loewner_pair(ctx.tspec(trial, "loewner"))
        elif kind == 2:
            a, b = random_chaotic_pair(ctx.tspec(trial, "chaotic"))
        else:
            a, b = random_near_ordered_pair(ctx.tspec(trial, "near"))
        try:
            profile = relation_profile(a, b, ctx.tol)
        except NumericalFailure as exc:
            ctx.rec.numerical_failures += 1
            ctx.rec.note(f"trial {trial}: {exc}")
            continue
        tol_eff = ctx.scale(a, b)
        for earlier, later in _CHAIN_LINKS:
            ve = getattr(profile, earlier)
            vl = getattr(profile, later)
            slack = chain_consistency_slack(ve, vl, tol_eff)
            if slack != float("inf"):
                ctx.rec.check(
                    f"{earlier.replace('_', '-')}-implies-{later.replace('_', '-')}",
                    slack, 0.0, trial,
                    f"{earlier} margin {ve.margin:.3e}, {later} margin {vl.margin:.3e}",
                )
        if profile.near.holds and not profile.loewner.holds:
            strict_gap += 1
    ctx.rec.note(f"near-order held while Loewner failed in {strict_gap} trials")


def _run_kim18_chain(ctx: SuiteContext):
    st_grid = ((1.0, 1.5), (1.0, 2.0), (1.5, 3.0), (2.0, 3.0), (1.0, 3.0), (1.0, 1.0))
    for trial in range(ctx.trials):
        w, a = ctx.tuple_and_weights(trial)
        s, t = st_grid[trial % len(st_grid)]
        h = harmonic_mean(w, a)
        ar = arithmetic_mean(w, a)
        qs, qt = quasi_arithmetic(s, w, a), quasi_arithmetic(t, w, a)
        qns, qnt = quasi_arithmetic(-s, w, a), quasi_arithmetic(-t, w, a)
        ctx.rec.verdict("qnegt-below-qnegs", loewner_cmp(qnt, qns, ctx.tol), trial)
        ctx.rec.verdict("qnegs-below-harmonic", loewner_cmp(qns, h, ctx.tol), trial)
        ctx.rec.verdict("harmonic-below-arithmetic", loewner_cmp(h, ar, ctx.tol), trial)
        ctx.rec.verdict("arithmetic-below-qs", loewner_cmp(ar, qs, ctx.tol), trial)
        ctx.rec.verdict("qs-below-qt", loewner_cmp(qs, qt, ctx.tol), trial)


def _run_mono_variables(ctx: SuiteContext):
    for trial in range(ctx.trials):
        n = ctx.pick(trial, "n", *ctx.n_range)
        dim = ctx.pick(trial, "dim", *ctx.dims)
        pairs = [
            random_loewner_pair(ctx.tspec(trial, f"pair/{j}", dim=dim))
            for j in range(n)
        ]
        w = random_weights(ctx.tspec(trial, "w", dim=dim), n)
        lower = MatrixTuple(tuple(p[0] for p in pairs))
        upper = MatrixTuple(tuple(p[1] for p in pairs))
        for p in (0.25, 0.5, 1.0, -0.25, -0.5, -1.0):
            v = near_order_cmp(
                quasi_arithmetic(p, w, lower), quasi_arithmetic(p, w, upper), ctx.tol
            )
            ctx.rec.verdict(f"near-monotone-p{p:+g}", v, trial)


_PQ_GRID = (0.1, 0.3, 0.5, 0.8, 1.0)


def _run_mono_parameters(ctx: SuiteContext):
    pq_pairs = [(p, q) for i, p in enumerate(_PQ_GRID) for q in _PQ_GRID[i:]]
    for trial in range(ctx.trials):
        constant = trial % 10 == 9
        if constant:
            x = random_hpd(ctx.tspec(trial, "x"))
            n = ctx.pick(trial, "n", *ctx.n_range)
            a = MatrixTuple((x,) * n)
            w = random_weights(ctx.tspec(trial, "w", dim=x.dim), n)
        else:
            w, a = ctx.tuple_and_weights(trial)
        p, q = pq_pairs[trial % len(pq_pairs)]
        h = harmonic_mean(w, a)
        ar = arithmetic_mean(w, a)
        le = log_euclidean(w, a)
        qp, qq = quasi_arithmetic(p, w, a), quasi_arithmetic(q, w, a)
        qnp, qnq = quasi_arithmetic(-p, w, a), quasi_arithmetic(-q, w, a)
        links = (
            ("harmonic-below-qnegq", h, qnq),
            ("qnegq-below-qnegp", qnq, qnp),
            ("qnegp-below-le", qnp, le),
            ("le-below-qp", le, qp),
            ("qp-below-qq", qp, qq),
            ("qq-below-arithmetic", qq, ar),
        )
        worst = 0.0
        for name, lo_m, hi_m in links:
            v = near_order_cmp(lo_m, hi_m, ctx.tol)
            ctx.rec.verdict(name, v, trial)
            worst = max(worst, abs(v.margin))
        if constant:
            ctx.rec.check(
                "constant-tuple-margins-vanish", 1e-10 - worst, 0.0, trial,
                f"largest |margin| = {worst:.3e}",
            )


def _run_mixed_chain(ctx: SuiteContext):
    pq_pairs = ((1.0, 1.5), (1.0, 2.0), (1.25, 1.75), (1.5, 2.0), (2.0, 2.0), (1.0, 1.0))
    for trial in range(ctx.trials):
        w, a = ctx.tuple_and_weights(trial)
        p, q = pq_pairs[trial % len(pq_pairs)]
        h = harmonic_mean(w, a)
        ar = arithmetic_mean(w, a)
        le = log_euclidean(w, a)
        qp, qq = quasi_arithmetic(p, w, a), quasi_arithmetic(q, w, a)
        qnp, qnq = quasi_arithmetic(-p, w, a), quasi_arithmetic(-q, w, a)
        qip, qiq = quasi_arithmetic(1 / p, w, a), quasi_arithmetic(1 / q, w, a)
        qnip, qniq = quasi_arithmetic(-1 / p, w, a), quasi_arithmetic(-1 / q, w, a)
        ctx.rec.verdict("qnegq-below-qnegp", loewner_cmp(qnq, qnp, ctx.tol), trial)
        ctx.rec.verdict("qnegp-below-harmonic", loewner_cmp(qnp, h, ctx.tol), trial)
        ctx.rec.verdict("harmonic-below-qneginvp", near_order_cmp(h, qnip, ctx.tol), trial)
        ctx.rec.verdict("qneginvp-below-qneginvq", near_order_cmp(qnip, qniq, ctx.tol), trial)
        ctx.rec.verdict("qneginvq-below-le", near_order_cmp(qniq, le, ctx.tol), trial)
        ctx.rec.verdict("le-below-qinvq", near_order_cmp(le, qiq, ctx.tol), trial)
        ctx.rec.verdict("qinvq-below-qinvp", near_order_cmp(qiq, qip, ctx.tol), trial)
        ctx.rec.verdict("qinvp-below-arithmetic", loewner_cmp(qip, ar, ctx.tol), trial)
        ctx.rec.verdict("arithmetic-below-qp", loewner_cmp(ar, qp, ctx.tol), trial)
        ctx.rec.verdict("qp-below-qq", loewner_cmp(qp, qq, ctx.tol), trial)


_TZ_GRID = ((0.0, 0.5), (0.2, 0.6), (0.5, 0.75), (0.7, 1.0))


def _run_renyi_properties(ctx: SuiteContext):
    for trial in range(ctx.trials):
        t, z = _TZ_GRID[trial % len(_TZ_GRID)]
        commuting = trial % 4 == 3
        w, a = ctx.tuple_and_weights(trial, commuting=commuting)
        try:
            r, trace = renyi_power_mean(t, z, w, a, ctx.solver)
        except NumericalFailure as exc:
            ctx.rec.numerical_failures += 1
            ctx.rec.note(f"trial {trial}: {exc}")
            continue
        res = renyi_residual(t, z, w, a, r)
        ctx.rec.check("fixed-point-residual", ctx.solver.residual_tol - res, 0.0,
                      trial, f"residual = {res:.3e}")
        ctx.rec.check("iterations-within-cap", 200 - trace.iterations, 0.0, trial,
                      f"iterations = {trace.iterations}")
        if commuting:
            qref = quasi_arithmetic(1.0 - t, w, a) if t > 0 else arithmetic_mean(w, a)
            ctx.rec.check("commuting-matches-power-mean", 1e-8 - _rel_err(r, qref),
                          0.0, trial, f"rel err = {_rel_err(r, qref):.3e}")
        for c in (0.1, 7.0):
            rc, _ = renyi_power_mean(t, z, w, a.scale(c), ctx.solver,
                                     x0=HpdMatrix(c * r.mat))
            err = _rel_err(rc, HpdMatrix(c * r.mat))
            ctx.rec.check("homogeneity", 1e-9 - err, 0.0, trial,
                          f"c = {c}, rel err = {err:.3e}")
        sigma = tuple(reversed(range(a.n)))
        rp, _ = renyi_power_mean(t, z, w.permute(sigma), a.permute(sigma),
                                 ctx.solver, x0=r)
        ctx.rec.check("permutation-invariance", 1e-9 - _rel_err(rp, r), 0.0, trial,
                      f"rel err = {_rel_err(rp, r):.3e}")
        for k in (2, 3):
            rk, _ = renyi_power_mean(t, z, w.repeat_blocks(k), a.repeat_blocks(k),
                                     ctx.solver, x0=r)
            ctx.rec.check("block-repetition", 1e-9 - _rel_err(rk, r), 0.0, trial,
                          f"k = {k}, rel err = {_rel_err(rk, r):.3e}")
        u = random_unitary(ctx.tspec(trial, "u", dim=a.dim))
        ru, _ = renyi_power_mean(t, z, w, a.congruence(u), ctx.solver,
                                 x0=HpdMatrix(u @ r.mat @ u.conj().T))
        err = _rel_err(ru, HpdMatrix(u @ r.mat @ u.conj().T))
        ctx.rec.check("unitary-covariance", 1e-9 - err, 0.0, trial,
                      f"rel err = {err:.3e}")
        rinv, _ = renyi_power_mean(t, z, w, a.inverse(), ctx.solver,
                                   x0=powm(r, -1.0))
        ctx.rec.verdict("inverse-tuple-bound",
                        loewner_cmp(powm(r, -1.0), rinv, ctx.tol), trial)
        if t >= 0.5:
            bound = sum(
                wj * operator_norm(aj) for wj, aj in zip(w.weights, a.items)
            )
            ctx.rec.check("norm-bound", bound - operator_norm(r), 1e-8, trial,
                          f"||R|| = {operator_norm(r):.6e}, bound = {bound:.6e}")


def _run_renyi_logdet(ctx: SuiteContext):
    for trial in range(ctx.trials):
        t, z = _TZ_GRID[trial % len(_TZ_GRID)]
        constant = trial % 3 == 2
        if constant:
            x = random_hpd(ctx.tspec(trial, "x"))
            n = ctx.pick(trial, "n", *ctx.n_range)
            a = MatrixTuple((x,) * n)
            w = random_weights(ctx.tspec(trial, "w", dim=x.dim), n)
        else:
            w, a = ctx.tuple_and_weights(trial)
        r, _ = renyi_power_mean(t, z, w, a, ctx.solver)
        gap = log_det(r) - sum(
            wj * log_det(aj) for wj, aj in zip(w.weights, a.items)
        )
        ctx.rec.check("log-det-dominates-weighted-sum", gap, 1e-8, trial,
                      f"log det gap = {gap:.6e}")
        if constant:
            ctx.rec.check("constant-tuple-equality", 1e-6 - abs(gap), 0.0, trial,
                          f"log det gap = {gap:.6e}")


def _run_renyi_quasi(ctx: SuiteContext):
    lo, hi = ctx.spec.spectrum_range
    for trial in range(ctx.trials):
        t, z = _TZ_GRID[trial % len(_TZ_GRID)]
        contracting = trial % 2 == 0
        spectrum = (min(lo, 0.9), 1.0) if contracting else (1.0, max(hi, 1.5))
        w, a = ctx.tuple_and_weights(trial, spectrum=spectrum)
        r, _ = renyi_power_mean(t, z, w, a, ctx.solver)
        root = powm(r, 1.0 / (1.0 - t))
        q = quasi_arithmetic(1.0 - t, w, a) if t > 0 else arithmetic_mean(w, a)
        if contracting:
            ctx.rec.verdict("below-identity",
                            loewner_cmp(r, identity(a.dim), ctx.tol), trial)
            ctx.rec.verdict("root-below-power-mean",
                            near_order_cmp(root, q, ctx.tol), trial)
        else:
            ctx.rec.verdict("above-identity",
                            loewner_cmp(identity(a.dim), r, ctx.tol), trial)
            ctx.rec.verdict("root-above-power-mean",
                            near_order_cmp(q, root, ctx.tol), trial)
            ctx.rec.verdict("root-above-log-euclidean",
                            near_order_cmp(log_euclidean(w, a), root, ctx.tol), trial)


def _run_renyi_le(ctx: SuiteContext):
    lo, hi = ctx.spec.spectrum_range
    p_grid = (0.2, 0.1, 0.05)
    for trial in range(ctx.trials):
        t, z = _TZ_GRID[trial % len(_TZ_GRID)]
        contracting = trial % 2 == 0
        spectrum = (min(lo, 0.9), 1.0) if contracting else (1.0, max(hi, 1.5))
        w, a = ctx.tuple_and_weights(trial, spectrum=spectrum)
        try:
            study = renyi_zero_limit_study(t, z, w, a, p_grid, ctx.solver, ctx.tol)
        except NumericalFailure as exc:
            ctx.rec.numerical_failures += 1
            ctx.rec.note(f"trial {trial}: {exc}")
            continue
        for name, series in study.verdicts.items():
            for v in series:
                if v is not None:
                    ctx.rec.verdict(name, v, trial)


def _run_le_near(ctx: SuiteContext):
    for trial in range(ctx.trials):
        w, a = ctx.tuple_and_weights(trial)
        h = harmonic_mean(w, a)
        ar = arithmetic_mean(w, a)
        le = log_euclidean(w, a)
        ctx.rec.verdict("harmonic-below-le", near_order_cmp(h, le, ctx.tol), trial)
        ctx.rec.verdict("le-below-arithmetic", near_order_cmp(le, ar, ctx.tol), trial)


_LT_GRID = (0.02, 0.01, 0.005, 0.0025)
_LT_MEANS = (
    ("arithmetic", lambda w, a: arithmetic_mean(w, a)),
    ("harmonic", lambda w, a: harmonic_mean(w, a)),
    ("quasi+0.5", lambda w, a: quasi_arithmetic(0.5, w, a)),
    ("quasi-0.5", lambda w, a: quasi_arithmetic(-0.5, w, a)),
)


def _run_lie_trotter(ctx: SuiteContext):
    for trial in range(ctx.trials):
        n = ctx.pick(trial, "n", *ctx.n_range)
        dim = ctx.pick(trial, "dim", *ctx.dims)
        curves = random_curve_family(ctx.tspec(trial, "curves", dim=dim), n)
        w = random_weights(ctx.tspec(trial, "w", dim=dim), n)
        target = expm(
            HermitianMatrix(
                _sym(sum(wj * c.generator.mat for wj, c in zip(w.weights, curves)))
            )
        )
        scaled = {}
        errors = {}
        for name, fn in _LT_MEANS:
            vals = []
            for s in _LT_GRID:
                pts = MatrixTuple(tuple(c.at(s) for c in curves))
                vals.append(powm(fn(w, pts), 1.0 / s))
            scaled[name] = vals
            errors[name] = [thompson_distance(v, target) for v in vals]
            order = dyadic_order(_LT_GRID, errors[name])
            if not np.isnan(order):
                ctx.rec.check(f"order-in-band--{name}",
                              min(order - 0.7, 1.3 - order), 0.0, trial,
                              f"estimated order = {order:.3f}")
            ctx.rec.check(f"terminal-error--{name}",
                          5e-3 - errors[name][-1], 0.0, trial,
                          f"E({_LT_GRID[-1]}) = {errors[name][-1]:.3e}")
        gap = thompson_distance(scaled["arithmetic"][-1], scaled["harmonic"][-1])
        ctx.rec.check("cross-mean-target-agreement", 5e-3 - gap, 0.0, trial,
                      f"d(arithmetic, harmonic) at s_min = {gap:.3e}")
        for name in ("quasi+0.5", "quasi-0.5"):
            sandwiched = True
            for i, s in enumerate(_LT_GRID):
                pts = MatrixTuple(tuple(c.at(s) for c in curves))
                h = harmonic_mean(w, pts)
                ar = arithmetic_mean(w, pts)
                g = quasi_arithmetic(0.5 if name.endswith("+0.5") else -0.5, w, pts)
                if not (
                    near_order_cmp(h, g, ctx.tol).holds
                    and near_order_cmp(g, ar, ctx.tol).holds
                ):
                    sandwiched = False
            if not sandwiched:
                ctx.rec.skipped += 1
                continue
            worst = min(
                max(errors["arithmetic"][i], errors["harmonic"][i]) + 1e-6
                - errors[name][i]
                for i in range(len(_LT_GRID))
            )
            ctx.rec.check(f"error-sandwich--{name}", worst, 0.0, trial,
                          f"min slack over grid = {worst:.3e}")


def _run_cartan_le_wass(ctx: SuiteContext):
    for trial in range(ctx.trials):
        w, a = ctx.tuple_and_weights(trial)
        try:
            k, _ = karcher_mean(w, a, ctx.solver)
            om, _ = wasserstein_barycenter(w, a, ctx.solver)
        except NumericalFailure as exc:
            ctx.rec.numerical_failures += 1
            ctx.rec.note(f"trial {trial}: {exc}")
            continue
        le = log_euclidean(w, a)
        ar = arithmetic_mean(w, a)
        kres = karcher_residual(w, a, k)
        ctx.rec.check("karcher-residual", ctx.solver.residual_tol - kres, 0.0,
                      trial, f"residual = {kres:.3e}")
        bres = barycenter_residual(w, a, om)
        ctx.rec.check("barycenter-residual", ctx.solver.residual_tol - bres, 0.0,
                      trial, f"residual = {bres:.3e}")
        ctx.rec.verdict(
            "karcher-logmajorized-by-le",
            weak_log_majorization_cmp(k, le, ctx.tol, strong=True), trial,
        )
        ctx.rec.verdict(
            "le-weakly-logmajorized-by-barycenter",
            weak_log_majorization_cmp(le, om, ctx.tol), trial,
        )
        ctx.rec.verdict("barycenter-below-arithmetic",
                        loewner_cmp(om, ar, ctx.tol), trial)


@dataclass(frozen=True)
class SuiteDef:
    runner: object
    summary: str
    default_dims: tuple[int, int] = (2, 8)
    default_n: tuple[int, int] = (2, 5)


SUITES: dict[str, SuiteDef] = {
    "thompson-lemma": SuiteDef(
        _run_thompson_lemma,
        "Thompson distance: inversion/congruence invariance, sum and power "
        "contraction, geodesic convexity.",
        (2, 8), (2, 2),
    ),
    "equivalence-7way": SuiteDef(
        _run_equivalence_7way,
        "The seven equivalent formulations of the near order agree pairwise "
        "on every sampled pair.",
        (2, 8), (2, 2),
    ),
    "mono-sp-wass": SuiteDef(
        _run_mono_sp_wass,
        "Spectral and Wasserstein two-variable means are monotone in the "
        "parameter exactly when the endpoints are near-ordered.",
        (2, 8), (2, 2),
    ),
    "in-betweenness": SuiteDef(
        _run_in_betweenness,
        "For near-ordered endpoints the spectral and Wasserstein means lie "
        "near-between them.",
        (2, 8), (2, 2),
    ),
    "near-sp-wass": SuiteDef(
        _run_near_sp_wass,
        "The spectral mean is near-below the Wasserstein mean at every "
        "parameter; corollaries for Loewner pairs and root congruence.",
        (2, 8), (2, 2),
    ),
    "fidelity-recursion": SuiteDef(
        _run_fidelity_recursion,
        "Near-order doubling recursion of the operator fidelity in either "
        "argument, on hypothesis-conforming pairs.",
        (2, 8), (2, 2),
    ),
    "relation-chain": SuiteDef(
        _run_relation_chain,
        "Loewner implies chaotic implies near implies sorted-eigenvalue "
        "domination implies weak log-majorization, on pairs from all four "
        "samplers.",
        (2, 8), (2, 2),
    ),
    "kim18-chain": SuiteDef(
        _run_kim18_chain,
        "Loewner ordering of power means of orders at least 1 around the "
        "harmonic and arithmetic means.",
        (2, 6), (2, 5),
    ),
    "mono-variables": SuiteDef(
        _run_mono_variables,
        "Entrywise Loewner domination of tuples yields near-ordered power "
        "means for orders in [-1, 1].",
        (2, 5), (2, 4),
    ),
    "mono-parameters": SuiteDef(
        _run_mono_parameters,
        "Six-link near-order chain of power means from harmonic through "
        "log-Euclidean to arithmetic for orders in (0, 1].",
        (2, 6), (2, 5),
    ),
    "mixed-chain": SuiteDef(
        _run_mixed_chain,
        "Interleaved Loewner and near-order chain across reciprocal power "
        "mean orders (outer Loewner links need orders in [1, 2]).",
        (2, 6), (2, 5),
    ),
    "renyi-properties": SuiteDef(
        _run_renyi_properties,
        "Two-parameter power mean: residual, iteration cap, commuting "
        "collapse, homogeneity, permutation/block/unitary invariance, "
        "inverse bound, norm bound.",
        (2, 8), (2, 5),
    ),
    "renyi-logdet": SuiteDef(
        _run_renyi_logdet,
        "Determinant of the two-parameter power mean dominates the weighted "
        "geometric determinant, with equality on constant tuples.",
        (2, 6), (2, 5),
    ),
    "renyi-quasi": SuiteDef(
        _run_renyi_quasi,
        "Contracting tuples keep the power mean below the identity and its "
        "root near-below the matching power mean; dually for expanding "
        "tuples.",
        (2, 6), (2, 5),
    ),
    "renyi-le": SuiteDef(
        _run_renyi_le,
        "Two-sided small-power behaviour of the two-parameter power mean "
        "against the log-Euclidean bound.",
        (2, 6), (2, 4),
    ),
    "le-near": SuiteDef(
        _run_le_near,
        "Harmonic below log-Euclidean below arithmetic in the near order on "
        "random tuples.",
        (2, 8), (2, 5),
    ),
    "lie-trotter": SuiteDef(
        _run_lie_trotter,
        "Scaled means of exponential curves converge at first order to the "
        "log-Euclidean combination of the generators.",
        (2, 4), (2, 4),
    ),
    "cartan-le-wass": SuiteDef(
        _run_cartan_le_wass,
        "Riemannian least-squares mean log-majorized by log-Euclidean, which "
        "is weakly log-majorized by the Bures-Wasserstein barycenter, itself "
        "Loewner-below the arithmetic mean.",
        (2, 6), (2, 5),
    ),
}


def run_verification_suite(
    suite: str,
    spec: SamplerSpec,
    tol: ToleranceProfile,
    dims: tuple[int, int] | None = None,
    solver: SolverConfig | None = None,
) -> SuiteReport:
    """Run one named suite; deterministic report for (suite, spec, tol)."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; known: {', '.join(sorted(SUITES))}")
    sdef = SUITES[suite]
    solver = solver or SolverConfig()
    dims = dims or sdef.default_dims
    rec = Recorder()
    ctx = SuiteContext(
        suite=suite, spec=spec, tol=tol, dims=dims,
        n_range=sdef.default_n, solver=solver, rec=rec,
    )
    _eigh(np.eye(2, dtype=np.complex128))  # warm the kernel outside the timer
    start = time.perf_counter()
    sdef.runner(ctx)
    wall = time.perf_counter() - start
    return SuiteReport(
        suite=suite,
        seed=spec.seed,
        trials=spec.count,
        dims=dims,
        spectrum_range=spec.spectrum_range,
        tolerance={"psd_margin": tol.psd_margin, "rel_scale": tol.rel_scale},
        solver={"residual_tol": solver.residual_tol, "max_iter": solver.max_iter,
                "initial_guess": solver.initial_guess},
        library_version=__version__,
        properties=[rec.records[name] for name in sorted(rec.records)],
        skipped=rec.skipped,
        numerical_failures=rec.numerical_failures,
        notes=rec.notes,
        wall_seconds=wall,
    )


def conjecture_search_le_omega(
    spec: SamplerSpec,
    n_range: tuple[int, int] = (2, 6),
    tol: ToleranceProfile | None = None,
    dims: tuple[int, int] | None = None,
    solver: SolverConfig | None = None,
    dump_dir: str | None = None,
    dump_below: float | None = None,
) -> SuiteReport:
    """Randomized search for a violation of: log-Euclidean near-below the
    Bures-Wasserstein barycenter.

    Records the near-order margin lambda_min(LE^{-1} # Omega) - 1 on every
    trial; the minimum margin is data, not an assertion.  Any trial whose
    margin falls below ``dump_below`` (default: minus the effective
    tolerance) is dumped as replayable matrix files under ``dump_dir``.
    """
    tol = tol or ToleranceProfile(psd_margin=1e-8)
    solver = solver or SolverConfig()
    dims = dims or (2, 6)
    if not (2 <= n_range[0] <= n_range[1] <= 8):
        raise ValueError("n_range must lie within [2, 8]")
    rec = Recorder()
    ctx = SuiteContext(
        suite="conjecture-le-omega", spec=spec, tol=tol, dims=dims,
        n_range=n_range, solver=solver, rec=rec,
    )
    counterexamples: list[str] = []
    _eigh(np.eye(2, dtype=np.complex128))
    start = time.perf_counter()
    for trial in range(spec.count):
        w, a = ctx.tuple_and_weights(trial)
        try:
            om, _ = wasserstein_barycenter(w, a, solver)
        except NumericalFailure as exc:
            rec.skipped += 1
            rec.note(f"trial {trial}: barycenter solver failed: {exc}")
            continue
        le = log_euclidean(w, a)
        v = near_order_cmp(le, om, tol)
        rec.verdict("le-below-barycenter", v, trial)
        threshold = -ctx.scale(le, om) if dump_below is None else dump_below
        if dump_dir is not None and v.margin < threshold:
            path = dump_conjecture_trial(
                dump_dir, spec.seed, trial, w, a, v.margin
            )
            counterexamples.append(path)
    wall = time.perf_counter() - start
    return SuiteReport(
        suite="conjecture-le-omega",
        seed=spec.seed,
        trials=spec.count,
        dims=dims,
        spectrum_range=spec.spectrum_range,
        tolerance={"psd_margin": tol.psd_margin, "rel_scale": tol.rel_scale},
        solver={"residual_tol": solver.residual_tol, "max_iter": solver.max_iter,
                "initial_guess": solver.initial_guess},
        library_version=__version__,
        properties=[rec.records[name] for name in sorted(rec.records)],
        skipped=rec.skipped,
        numerical_failures=rec.numerical_failures,
        notes=rec.notes,
        counterexamples=counterexamples,
        wall_seconds=wall,
    )


def dump_conjecture_trial(
    dump_dir: str, seed: int, trial: int, w: WeightVector, a: MatrixTuple,
    margin: float,
) -> str:
    """Persist one trial's inputs as matrix files plus metadata; returns the path."""
    path = os.path.join(dump_dir, f"trial-{seed}-{trial:05d}")
    os.makedirs(path, exist_ok=True)
    for j, aj in enumerate(a.items):
        write_matrix(os.path.join(path, f"matrix-{j:02d}.json"), aj,
                     label=f"seed {seed} trial {trial} operand {j}")
    with open(os.path.join(path, "weights.json"), "w", encoding="utf-8") as fp:
        json.dump({"weights": list(w.weights)}, fp)
        fp.write("\n")
    with open(os.path.join(path, "meta.json"), "w", encoding="utf-8") as fp:
        json.dump({"seed": seed, "trial": trial, "margin": margin, "n": a.n,
                   "dim": a.dim}, fp, sort_keys=True)
        fp.write("\n")
    return path


def replay_conjecture_trial(
    trial_dir: str,
    tol: ToleranceProfile | None = None,
    solver: SolverConfig | None = None,
) -> dict:
    """Recompute the near-order margin of a dumped conjecture trial."""
    tol = tol or ToleranceProfile(psd_margin=1e-8)
    solver = solver or SolverConfig()
    with open(os.path.join(trial_dir, "weights.json"), encoding="utf-8") as fp:
        w = WeightVector(json.load(fp)["weights"])
    mats = []
    j = 0
    while os.path.exists(os.path.join(trial_dir, f"matrix-{j:02d}.json")):
        h, _ = read_matrix(os.path.join(trial_dir, f"matrix-{j:02d}.json"),
                           require_hpd=True)
        mats.append(h)
        j += 1
    a = MatrixTuple(tuple(mats))
    om, _ = wasserstein_barycenter(w, a, solver)
    le = log_euclidean(w, a)
    v = near_order_cmp(le, om, tol)
    out = {"margin": v.margin, "holds": v.holds, "witness": v.witness}
    meta_path = os.path.join(trial_dir, "meta.json")
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fp:
            out["recorded_margin"] = json.load(fp).get("margin")
    return out

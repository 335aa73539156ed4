"""Numerical limit studies: small-parameter behaviour of means.

Three studies: the s -> 0 scaling limit of an idempotent multi-mean along
matrix exponential curves, the p -> 0 behaviour of the two-parameter
power mean on powered tuples, and the p -> 0 convergence of the power
mean to the log-Euclidean mean.  Each produces a :class:`LimitStudyReport`
of per-grid-point distances and order verdicts plus a dyadic convergence
order estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hpd import (
    DomainError,
    HermitianMatrix,
    HpdMatrix,
    _eigh,
    _from_eig,
    _sym,
    expm,
    identity,
    powm,
)
from .multi_means import (
    MatrixTuple,
    SolverConfig,
    WeightVector,
    log_euclidean,
    quasi_arithmetic,
    renyi_power_mean,
)
from .orders import OrderVerdict, ToleranceProfile, near_order_cmp
from .pair_means import thompson_distance

# Grid floor: below this the 1/s power amplifies eigensolver rounding
# beyond the acceptance band.
GRID_FLOOR = 1e-3

# Distances below this are treated as exactly converged when estimating
# dyadic orders (log ratios of rounding noise are meaningless).
ORDER_NOISE_FLOOR = 1e-13


@dataclass(frozen=True)
class Curve:
    """Exponential curve s -> exp(s H) through the identity.

    The exponential family realizes every possible derivative at the
    identity while keeping the base point exact, which is all the limit
    theorems consume.
    """

    generator: HermitianMatrix

    def at(self, s: float) -> HpdMatrix:
        if s == 0.0:
            return identity(self.generator.dim)
        lam, v = _eigh(self.generator.mat)
        return HpdMatrix(_from_eig(np.exp(s * lam), v))

    @property
    def dim(self) -> int:
        return self.generator.dim


@dataclass(frozen=True)
class LimitStudyReport:
    """Aligned per-grid-point values and verdicts of one limit study."""

    study: str
    grid: tuple[float, ...]
    values: dict[str, tuple] = field(default_factory=dict)
    verdicts: dict[str, tuple] = field(default_factory=dict)
    estimated_order: float = float("nan")

    def __post_init__(self):
        if any(s <= 0 for s in self.grid):
            raise DomainError("grid entries must be positive")
        if any(a <= b for a, b in zip(self.grid, self.grid[1:])):
            raise DomainError("grid must be strictly decreasing toward 0")
        for name, series in list(self.values.items()) + list(self.verdicts.items()):
            if len(series) != len(self.grid):
                raise DomainError(f"series {name!r} is not aligned with the grid")

    def rows(self) -> list[dict]:
        out = []
        for i, g in enumerate(self.grid):
            row = {"study": self.study, "grid": g, "estimated_order": self.estimated_order}
            for name, series in self.values.items():
                row[name] = series[i]
            for name, series in self.verdicts.items():
                v = series[i]
                row[f"{name}_margin"] = None if v is None else v.margin
                row[f"{name}_holds"] = None if v is None else v.holds
            out.append(row)
        return out


def dyadic_order(grid, errors) -> float:
    """Median of log2(E(s)/E(s/2)) over halving pairs in the grid.

    The median is robust to one noisy point; pairs where either error sits
    at the rounding floor are skipped, and NaN is returned when no usable
    pair remains.
    """
    ratios = []
    for (s1, e1), (s2, e2) in zip(zip(grid, errors), zip(grid[1:], errors[1:])):
        if abs(s2 - s1 / 2.0) > 1e-9 * s1:
            continue
        if e1 <= ORDER_NOISE_FLOOR or e2 <= ORDER_NOISE_FLOOR:
            continue
        ratios.append(math.log2(e1 / e2))
    if not ratios:
        return float("nan")
    return float(np.median(ratios))


def lie_trotter_limit_study(
    mean_fn,
    w: WeightVector,
    curves: list[Curve],
    s_grid,
    mean_name: str = "mean",
    include_negative: bool = False,
) -> LimitStudyReport:
    """Error E(s) of the scaled mean of curve points against its limit.

    E(s) is the Thompson distance between G(w; curves at s)^{1/s} and
    exp(sum_j w_j H_j), the log-Euclidean combination of the curve
    generators.  The dyadic order estimate uses the positive side (and
    the negative side too when enabled).
    """
    if len(curves) != w.n:
        raise DomainError(f"{w.n} weights for {len(curves)} curves")
    dims = {c.dim for c in curves}
    if len(dims) != 1:
        raise DomainError("curves must share one dimension")
    grid = tuple(float(s) for s in s_grid)
    if any(not 0.0 < s < 1.0 for s in grid):
        raise DomainError("grid values must lie in (0, 1)")
    target_log = sum(wj * c.generator.mat for wj, c in zip(w.weights, curves))
    target = expm(HermitianMatrix(_sym(target_log)))

    def error_at(s: float) -> float:
        pts = MatrixTuple(tuple(c.at(s) for c in curves))
        g = mean_fn(w, pts)
        return thompson_distance(powm(g, 1.0 / s), target)

    errors = tuple(error_at(s) for s in grid)
    values = {"error": errors}
    all_ratios_grid, all_ratios_err = list(grid), list(errors)
    if include_negative:
        neg = tuple(error_at(-s) for s in grid)
        values["error_negative_side"] = neg
        all_ratios_grid += list(grid)
        all_ratios_err += list(neg)
        order = float(
            np.nanmedian([dyadic_order(grid, errors), dyadic_order(grid, neg)])
        )
    else:
        order = dyadic_order(grid, errors)
    return LimitStudyReport(
        study=f"lie-trotter/{mean_name}",
        grid=grid,
        values=values,
        estimated_order=order,
    )


def _hypothesis_side(a: MatrixTuple) -> str:
    spectra = []
    for aj in a.items:
        lam, _ = _eigh(aj.mat)
        spectra.append(lam)
    hi = max(float(l[-1]) for l in spectra)
    lo = min(float(l[0]) for l in spectra)
    if hi <= 1.0 + 1e-12:
        return "contracting"
    if lo >= 1.0 - 1e-12:
        return "expanding"
    raise DomainError(
        "tuple spectra must lie entirely in (0, 1] or entirely in [1, inf); "
        f"found range [{lo:.6e}, {hi:.6e}]"
    )


def renyi_zero_limit_study(
    t: float,
    z: float,
    w: WeightVector,
    a: MatrixTuple,
    p_grid,
    cfg: SolverConfig | None = None,
    tol: ToleranceProfile | None = None,
) -> LimitStudyReport:
    """p -> 0 behaviour of the power mean on powered tuples.

    For each p the study solves for R(w; A^p) and R(w; A^{-p}) and records

    * the near-order verdict of the negative-side value
      R(w; A^{-p})^{-1/p} against the positive-side value R(w; A^p)^{1/p};
    * under the contracting hypothesis (all spectra in (0, 1]) the
      per-p upper bound R(w; A^p)^{1/p} near-below Q_p(w; A^{1-t}), whose
      right side converges down to the limit bound LE(w; A^{1-t});
      dually the lower bound under the expanding hypothesis;
    * the Thompson distance of the positive-side value to LE(w; A^{1-t}),
      for trend inspection.
    """
    tol = tol or ToleranceProfile(psd_margin=1e-8)
    grid = tuple(float(p) for p in p_grid)
    side = _hypothesis_side(a)
    powered = a.power(1.0 - t)
    le_target = log_euclidean(w, powered)
    pair_verdicts, bound_verdicts, le_dist, gaps = [], [], [], []
    for p in grid:
        pos, _ = renyi_power_mean(t, z, w, a.power(p), cfg)
        neg, _ = renyi_power_mean(t, z, w, a.power(-p), cfg)
        pos_val = powm(pos, 1.0 / p)
        neg_val = powm(neg, -1.0 / p)
        pair_verdicts.append(near_order_cmp(neg_val, pos_val, tol))
        if side == "contracting":
            bound = quasi_arithmetic(p, w, powered)
            bound_verdicts.append(near_order_cmp(pos_val, bound, tol))
        else:
            bound = quasi_arithmetic(-p, w, powered)
            bound_verdicts.append(near_order_cmp(bound, neg_val, tol))
        le_dist.append(thompson_distance(pos_val, le_target))
        gaps.append(thompson_distance(neg_val, pos_val))
    bound_name = (
        "positive-side-below-power-mean"
        if side == "contracting"
        else "negative-side-above-power-mean"
    )
    return LimitStudyReport(
        study="renyi-zero",
        grid=grid,
        values={
            "distance_to_le_bound": tuple(le_dist),
            "two-sided-gap": tuple(gaps),
        },
        verdicts={
            "negative-side-below-positive-side": tuple(pair_verdicts),
            bound_name: tuple(bound_verdicts),
        },
        estimated_order=dyadic_order(grid, gaps),
    )


def qp_le_convergence_study(
    w: WeightVector,
    a: MatrixTuple,
    p_grid,
    tol: ToleranceProfile | None = None,
) -> LimitStudyReport:
    """Convergence of the power mean to the log-Euclidean mean as p -> 0.

    Records, per grid point p: the near verdicts LE below Q_p and Q_{-p}
    below LE, the parameter monotonicity Q_p below Q_q for the adjacent
    larger grid point q, and the Thompson distance d(Q_p, LE) for order
    estimation.
    """
    tol = tol or ToleranceProfile(psd_margin=1e-8)
    grid = tuple(float(p) for p in p_grid)
    le = log_euclidean(w, a)
    q_pos = [quasi_arithmetic(p, w, a) for p in grid]
    q_neg = [quasi_arithmetic(-p, w, a) for p in grid]
    below = tuple(near_order_cmp(le, q, tol) for q in q_pos)
    above = tuple(near_order_cmp(q, le, tol) for q in q_neg)
    mono = [None]
    for bigger, smaller in zip(q_pos, q_pos[1:]):
        mono.append(near_order_cmp(smaller, bigger, tol))
    dist = tuple(thompson_distance(q, le) for q in q_pos)
    return LimitStudyReport(
        study="qp-le",
        grid=grid,
        values={"distance_to_le": dist},
        verdicts={
            "le-below-qp": below,
            "qnegp-below-le": above,
            "qp-monotone-in-p": tuple(mono),
        },
        estimated_order=dyadic_order(grid, dist),
    )

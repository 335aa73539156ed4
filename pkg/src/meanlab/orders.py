"""Binary order relations on the positive definite cone, with margins.

Margins, not booleans, are the primitive: every relation test returns a
signed real where ``holds == (margin >= -effective tolerance)``, so that
verification suites can report worst-case slack and classify near-equality
cases stably.  Five relations are provided, forming an implication chain
(Loewner, then chaotic, then near-order, then sorted-eigenvalue
domination, then weak log-majorization); :func:`relation_profile` checks
them all and raises on any chain inconsistency.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hpd import (
    DomainError,
    HpdMatrix,
    NumericalFailure,
    _eigh,
    _sym,
    powm,
)
from .pair_means import _inv_sharp_nd, metric_geometric


@dataclass(frozen=True)
class ToleranceProfile:
    """Margin tolerance for relation verdicts.

    With ``rel_scale`` on (the default), the effective tolerance is
    ``psd_margin * max(1, ||A||, ||B||)`` so verdicts are invariant under
    the joint rescaling (A, B) -> (cA, cB).
    """

    psd_margin: float = 1e-9
    rel_scale: bool = True

    def __post_init__(self):
        if not self.psd_margin > 0:
            raise DomainError("psd_margin must be positive")

    def effective(self, *norms: float) -> float:
        if self.rel_scale:
            return self.psd_margin * max(1.0, *norms)
        return self.psd_margin


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of one relation test: flag, signed margin, and witness."""

    holds: bool
    margin: float
    witness: str


@dataclass(frozen=True)
class RelationProfile:
    loewner: OrderVerdict
    chaotic: OrderVerdict
    near: OrderVerdict
    eigen_entrywise: OrderVerdict
    weak_log_major: OrderVerdict

    def as_dict(self) -> dict:
        out = {}
        for name in ("loewner", "chaotic", "near", "eigen_entrywise", "weak_log_major"):
            v: OrderVerdict = getattr(self, name)
            out[name] = {"holds": v.holds, "margin": v.margin, "witness": v.witness}
        return out


def _norms(a: HpdMatrix, b: HpdMatrix) -> tuple[float, float]:
    la, _ = _eigh(a.mat)
    lb, _ = _eigh(b.mat)
    return float(np.abs(la).max()), float(np.abs(lb).max())


def _verdict(margin: float, tol_eff: float, witness: str) -> OrderVerdict:
    return OrderVerdict(bool(margin >= -tol_eff), float(margin), witness)


def loewner_cmp(a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile) -> OrderVerdict:
    """A <= B in the Loewner order; margin is lambda_min(B - A)."""
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")
    lam, _ = _eigh(_sym(b.mat - a.mat))
    margin = float(lam[0])
    return _verdict(
        margin,
        tol.effective(*_norms(a, b)),
        f"lambda_min(B - A) = {margin:.6e}",
    )


def chaotic_cmp(a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile) -> OrderVerdict:
    """log A <= log B in the Loewner order; margin is lambda_min(log B - log A)."""
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")
    la, va = _eigh(a.mat)
    lb, vb = _eigh(b.mat)
    log_a = _sym((va * np.log(la)) @ va.conj().T)
    log_b = _sym((vb * np.log(lb)) @ vb.conj().T)
    lam, _ = _eigh(_sym(log_b - log_a))
    margin = float(lam[0])
    return _verdict(
        margin,
        tol.effective(float(np.abs(la).max()), float(np.abs(lb).max())),
        f"lambda_min(log B - log A) = {margin:.6e}",
    )


def near_order_cmp(a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile) -> OrderVerdict:
    """Near order: A^{-1} # B >= I; margin is lambda_min(A^{-1} # B) - 1.

    Cross-checked against the dual criterion A # B^{-1} <= I computed on
    an independent path; a decisive sign disagreement between the two
    margins raises :class:`NumericalFailure`.
    """
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")
    lam, _ = _eigh(_inv_sharp_nd(a.mat, b.mat))
    margin = float(lam[0]) - 1.0
    dual = metric_geometric(a, powm(b, -1.0), 0.5)
    lam_dual, _ = _eigh(dual.mat)
    dual_margin = 1.0 - float(lam_dual[-1])
    tol_eff = tol.effective(*_norms(a, b))
    if (margin > tol_eff and dual_margin < -tol_eff) or (
        margin < -tol_eff and dual_margin > tol_eff
    ):
        raise NumericalFailure(
            "near-order criteria disagree: "
            f"lambda_min(A^-1 # B) - 1 = {margin:.6e} but "
            f"1 - lambda_max(A # B^-1) = {dual_margin:.6e}",
            payload={"margin": margin, "dual_margin": dual_margin},
        )
    return _verdict(
        margin,
        tol_eff,
        f"lambda_min(A^-1 # B) - 1 = {margin:.6e}, dual = {dual_margin:.6e}",
    )


def eigen_entrywise_cmp(a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile) -> OrderVerdict:
    """Sorted-eigenvalue domination; margin is min_i (lam_i(B) - lam_i(A))."""
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")
    la, _ = _eigh(a.mat)
    lb, _ = _eigh(b.mat)
    diffs = lb[::-1] - la[::-1]
    k = int(np.argmin(diffs))
    margin = float(diffs[k])
    return _verdict(
        margin,
        tol.effective(float(np.abs(la).max()), float(np.abs(lb).max())),
        f"min_i(lam_i(B) - lam_i(A)) = {margin:.6e} at descending index {k}",
    )


def spectra_equal_cmp(a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile) -> OrderVerdict:
    """Equality of sorted spectra; margin is -max_i |lam_i(A) - lam_i(B)|."""
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")
    la, _ = _eigh(a.mat)
    lb, _ = _eigh(b.mat)
    gaps = np.abs(la - lb)
    k = int(np.argmax(gaps))
    margin = -float(gaps[k])
    return _verdict(
        margin,
        tol.effective(float(np.abs(la).max()), float(np.abs(lb).max())),
        f"max_i |lam_i(A) - lam_i(B)| = {-margin:.6e} at ascending index {k}",
    )


def weak_log_majorization_cmp(
    a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile, strong: bool = False
) -> OrderVerdict:
    """Weak log-majorization of A by B on descending spectra.

    Margin is the smallest difference of leading log partial sums.  With
    ``strong`` set the full log products must also agree, which is encoded
    as margin = min(weak margin, -|total difference|) so the usual margin
    convention still decides the verdict.
    """
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")
    la, _ = _eigh(a.mat)
    lb, _ = _eigh(b.mat)
    pa = np.cumsum(np.log(la[::-1]))
    pb = np.cumsum(np.log(lb[::-1]))
    diffs = pb - pa
    k = int(np.argmin(diffs))
    margin = float(diffs[k])
    witness = f"min_k sum-diff of leading log eigenvalues = {margin:.6e} at k = {k + 1}"
    if strong:
        total = float(diffs[-1])
        margin = min(margin, -abs(total))
        witness += f", full-product log difference = {total:.6e}"
    return _verdict(
        margin,
        tol.effective(float(np.abs(la).max()), float(np.abs(lb).max())),
        witness,
    )


_CHAIN = ("loewner", "chaotic", "near", "eigen_entrywise", "weak_log_major")


def relation_profile(a: HpdMatrix, b: HpdMatrix, tol: ToleranceProfile) -> RelationProfile:
    """All five verdicts, with the implication chain asserted.

    Each relation in the chain implies the next; a stronger relation
    holding while a weaker one decisively fails is a numerical
    inconsistency and raises :class:`NumericalFailure` with the full
    profile attached.  A boundary case, where both margins are within the
    effective tolerance of zero, is treated as consistent.
    """
    profile = RelationProfile(
        loewner=loewner_cmp(a, b, tol),
        chaotic=chaotic_cmp(a, b, tol),
        near=near_order_cmp(a, b, tol),
        eigen_entrywise=eigen_entrywise_cmp(a, b, tol),
        weak_log_major=weak_log_majorization_cmp(a, b, tol),
    )
    tol_eff = tol.effective(*_norms(a, b))
    for earlier, later in zip(_CHAIN, _CHAIN[1:]):
        ve: OrderVerdict = getattr(profile, earlier)
        vl: OrderVerdict = getattr(profile, later)
        boundary = abs(ve.margin) <= tol_eff and abs(vl.margin) <= tol_eff
        if ve.holds and not vl.holds and not boundary:
            raise NumericalFailure(
                f"implication chain violated: {earlier} holds "
                f"(margin {ve.margin:.6e}) but {later} fails (margin {vl.margin:.6e})",
                payload={"profile": profile.as_dict(), "earlier": earlier, "later": later},
            )
    return profile


def chain_consistency_slack(
    strong: OrderVerdict, weak: OrderVerdict, tol_eff: float
) -> float:
    """Signed slack of one implication link; negative means violated.

    The link "strong implies weak" is decisively violated only when the
    strong margin clears +tol while the weak margin is below -tol.
    """
    if not strong.holds:
        return float("inf")
    return max(tol_eff - strong.margin, weak.margin + tol_eff)


def iff_consistency_slack(m1: float, m2: float, tol_eff: float) -> float:
    """Signed slack of a margin equivalence; negative means contradiction.

    Two margins contradict when one clears +tol while the other is below
    -tol; margins inside the band are boundary cases, consistent with
    either verdict.
    """
    lo, hi = min(m1, m2), max(m1, m2)
    return max(tol_eff - hi, lo + tol_eff)

"""Two-variable means and distances on the positive definite cone.

Weighted arithmetic, metric geometric, spectral geometric and Wasserstein
means, operator fidelity, and the Thompson, Bures-Wasserstein and spectral
distances.  All functions are pure; matrices are decomposed at most a
handful of times per call and never cached across calls.
"""
from __future__ import annotations

import math

import numpy as np

from .hpd import (
    DomainError,
    HermitianMatrix,
    HpdMatrix,
    NumericalFailure,
    _eigh,
    _from_eig,
    _sym,
)

# Clamp band for the Bures-Wasserstein trace expression: tiny negative
# values are rounding, anything below is treated as a numerical failure.
_BW_CLAMP = 1e-12


def _check_pair(a: HpdMatrix, b: HpdMatrix) -> None:
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _half_powers(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lam, v = _eigh(mat)
    if lam[0] <= 0.0:
        raise DomainError(f"matrix is not positive definite (lambda_min = {lam[0]:.6e})")
    root = np.sqrt(lam)
    return _from_eig(root, v), _from_eig(1.0 / root, v)


def _inv_sharp_nd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # A^{-1} # B through the closed form A^{-1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2}
    ah, aih = _half_powers(a)
    lam, v = _eigh(_sym(ah @ b @ ah))
    inner_root = _from_eig(np.sqrt(lam), v)
    return _sym(aih @ inner_root @ aih)


def inv_sharp(a: HpdMatrix, b: HpdMatrix) -> HpdMatrix:
    """Closed form of A^{-1} # B, the geometric midpoint of A^{-1} and B.

    This is the canonical code path used by the near-order test, the
    spectral geometric mean and the Wasserstein mean; cross-validated in
    the tests against ``metric_geometric(A^{-1}, B, 1/2)``.
    """
    _check_pair(a, b)
    return HpdMatrix(_inv_sharp_nd(a.mat, b.mat))


def weighted_arithmetic(a: HpdMatrix, b: HpdMatrix, t: float):
    """(1 - t) A + t B; HPD for t in [0, 1], Hermitian otherwise."""
    _check_pair(a, b)
    out = (1.0 - t) * a.mat + t * b.mat
    if 0.0 <= t <= 1.0:
        return HpdMatrix(out)
    return HermitianMatrix(out)


def metric_geometric(a: HpdMatrix, b: HpdMatrix, t: float) -> HpdMatrix:
    """Geodesic mean A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}, any real t."""
    _check_pair(a, b)
    ah, aih = _half_powers(a.mat)
    lam, v = _eigh(_sym(aih @ b.mat @ aih))
    if lam[0] <= 0.0:
        raise NumericalFailure(
            f"congruenced second operand lost definiteness (lambda_min = {lam[0]:.6e})"
        )
    mid = _from_eig(lam ** t, v)
    return HpdMatrix(_sym(ah @ mid @ ah))


def spectral_geometric(a: HpdMatrix, b: HpdMatrix, t: float) -> HpdMatrix:
    """(A^{-1} # B)^t A (A^{-1} # B)^t, any real t."""
    _check_pair(a, b)
    lam, v = _eigh(_inv_sharp_nd(a.mat, b.mat))
    f = _from_eig(lam ** t, v)
    return HpdMatrix(_sym(f @ a.mat @ f))


def wasserstein_mean(a: HpdMatrix, b: HpdMatrix, t: float) -> HpdMatrix:
    """Congruence form [I + t(A^{-1} # B - I)] A [same factor].

    For t outside [0, 1] the interpolation factor can lose definiteness;
    such inputs are rejected.
    """
    _check_pair(a, b)
    c = _inv_sharp_nd(a.mat, b.mat)
    f = (1.0 - t) * np.eye(a.dim) + t * c
    lam, v = _eigh(f)
    if lam[0] <= _BW_CLAMP:
        raise DomainError(
            f"interpolation factor not positive definite at t={t} "
            f"(lambda_min = {lam[0]:.6e})"
        )
    return HpdMatrix(_sym(f @ a.mat @ f))


def fidelity(a: HpdMatrix, b: HpdMatrix) -> HpdMatrix:
    """Operator fidelity (A^{1/2} B A^{1/2})^{1/2}."""
    _check_pair(a, b)
    ah, _ = _half_powers(a.mat)
    lam, v = _eigh(_sym(ah @ b.mat @ ah))
    return HpdMatrix(_from_eig(np.sqrt(lam), v))


def thompson_distance(a: HpdMatrix, b: HpdMatrix) -> float:
    """||log A^{-1/2} B A^{-1/2}|| in the operator norm."""
    _check_pair(a, b)
    _, aih = _half_powers(a.mat)
    lam, _ = _eigh(_sym(aih @ b.mat @ aih))
    if lam[0] <= 0.0:
        raise NumericalFailure(
            f"congruenced operand lost definiteness (lambda_min = {lam[0]:.6e})"
        )
    return float(np.abs(np.log(lam)).max())


def bures_wasserstein_distance(a: HpdMatrix, b: HpdMatrix) -> float:
    """sqrt(tr(A + B) - 2 tr (A^{1/2} B A^{1/2})^{1/2}).

    The trace expression is clamped to zero when within -1e-12 of it;
    a larger negative value signals a numerical failure.
    """
    _check_pair(a, b)
    ah, _ = _half_powers(a.mat)
    lam, _ = _eigh(_sym(ah @ b.mat @ ah))
    expr = float(np.trace(a.mat).real + np.trace(b.mat).real) - 2.0 * float(
        np.sqrt(np.maximum(lam, 0.0)).sum()
    )
    if expr < -_BW_CLAMP:
        raise NumericalFailure(
            f"Bures-Wasserstein trace expression is negative ({expr:.6e})"
        )
    return math.sqrt(max(expr, 0.0))


def spectral_semimetric(a: HpdMatrix, b: HpdMatrix) -> float:
    """2 ||log(A^{-1} # B)|| in the operator norm."""
    _check_pair(a, b)
    lam, _ = _eigh(_inv_sharp_nd(a.mat, b.mat))
    return 2.0 * float(np.abs(np.log(lam)).max())

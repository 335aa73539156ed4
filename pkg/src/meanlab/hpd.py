"""Dense Hermitian linear algebra kernel.

Everything else in the package is built on the primitives here: a cyclic
Jacobi eigensolver for Hermitian matrices, spectral matrix functions
(powers, log, exp), congruence transforms, operator norms and log
determinants.  All values are immutable after construction and all
operations are pure functions of their inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


MAX_DIM = 64

# Construction symmetrization band: inputs with relative asymmetry below
# this are replaced by (H + H*)/2, anything worse is rejected.
ASYMMETRY_TOL = 1e-13

# Jacobi sweep control: stop when the off-diagonal Frobenius norm falls
# below OFF_TOL * ||H||_F, give up after ROTATION_CAP_FACTOR * m**2
# rotations.
OFF_TOL = 1e-14
ROTATION_CAP_FACTOR = 30


class DomainError(ValueError):
    """An input is outside the mathematical domain of an operation."""


class NumericalFailure(RuntimeError):
    """A computation could not be completed to the required accuracy.

    Carries a ``payload`` dict with diagnostic data (iteration traces,
    offending margins, witnesses) for post-mortem inspection.
    """

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = dict(payload or {})


@njit(cache=True)
def _jacobi_sweeps(a, v):  # pragma: no cover - compiled
    # Cyclic Jacobi on a Hermitian matrix, 2x2 unitary rotations.
    #
    # One rotation zeroes the pivot a[p,q]: with a[p,q] = r*e^{i*theta},
    # a phase rotation reduces the 2x2 block to the real symmetric case,
    # which is then diagonalized by the classical stable tangent formula.
    # The combined unitary J (identity outside rows/cols p,q) is
    #   J[p,p] = c, J[p,q] = s, J[q,p] = -s*e^{-i*theta},
    #   J[q,q] = c*e^{-i*theta},
    # and the update is A <- J* A J, V <- V J.  Hermitian symmetry is
    # maintained exactly by mirroring the updated columns onto the rows.
    m = a.shape[0]
    fro = 0.0
    for i in range(m):
        for j in range(m):
            x = a[i, j]
            fro += x.real * x.real + x.imag * x.imag
    fro = math.sqrt(fro)
    target = OFF_TOL * fro
    skip = target / (2.0 * m)
    cap = ROTATION_CAP_FACTOR * m * m
    rot = 0
    while True:
        off = 0.0
        for i in range(m - 1):
            for j in range(i + 1, m):
                x = a[i, j]
                off += 2.0 * (x.real * x.real + x.imag * x.imag)
        off = math.sqrt(off)
        if off <= target:
            return rot, True
        if rot >= cap:
            return rot, False
        for p in range(m - 1):
            for q in range(p + 1, m):
                alpha = a[p, q]
                r = abs(alpha)
                if r <= skip:
                    continue
                rot += 1
                eio = alpha / r
                eio_c = eio.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for i in range(m):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    new_p = c * aip - s * eio_c * aiq
                    new_q = s * aip + c * eio_c * aiq
                    a[i, p] = new_p
                    a[i, q] = new_q
                    a[p, i] = new_p.conjugate()
                    a[q, i] = new_q.conjugate()
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(m):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * eio_c * viq
                    v[i, q] = s * vip + c * eio_c * viq


def _eigh(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian ndarray, eigenvalues ascending."""
    m = mat.shape[0]
    if m == 1:
        return np.array([mat[0, 0].real]), np.eye(1, dtype=np.complex128)
    a = np.array(mat, dtype=np.complex128, order="C", copy=True)
    v = np.eye(m, dtype=np.complex128)
    rotations, converged = _jacobi_sweeps(a, v)
    if not converged:
        raise NumericalFailure(
            f"Jacobi eigensolver did not converge within {rotations} rotations "
            f"for a {m}x{m} matrix",
            payload={"rotations": rotations, "dim": m},
        )
    lam = np.real(np.diag(a)).copy()
    order = np.argsort(lam, kind="stable")
    return lam[order], np.ascontiguousarray(v[:, order])


def _sym(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def _from_eig(lam: np.ndarray, v: np.ndarray) -> np.ndarray:
    return _sym((v * lam) @ v.conj().T)


def _opnorm(mat: np.ndarray) -> float:
    lam, _ = _eigh(_sym(mat))
    return float(np.abs(lam).max()) if lam.size else 0.0


class HermitianMatrix:
    """An m-by-m complex Hermitian matrix, symmetrized at construction.

    Inputs whose asymmetry max|H - H*| exceeds ``ASYMMETRY_TOL`` times the
    largest entry are rejected; smaller asymmetry is absorbed by replacing
    the input with (H + H*)/2.
    """

    __slots__ = ("mat",)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {a.shape}")
        m = a.shape[0]
        if not 1 <= m <= MAX_DIM:
            raise DomainError(f"dimension {m} outside [1, {MAX_DIM}]")
        if not np.all(np.isfinite(a.view(np.float64))):
            raise DomainError("matrix entries must be finite")
        scale = float(np.abs(a).max()) if m else 0.0
        asym = float(np.abs(a - a.conj().T).max())
        if asym > ASYMMETRY_TOL * scale:
            raise DomainError(
                f"asymmetry {asym:.3e} exceeds {ASYMMETRY_TOL:.0e} * max|entry| "
                f"= {ASYMMETRY_TOL * scale:.3e}"
            )
        mat = _sym(a)
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __eq__(self, other):
        return isinstance(other, HermitianMatrix) and np.array_equal(
            self.mat, other.mat
        )

    def __hash__(self):
        return hash(self.mat.tobytes())

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class HpdMatrix(HermitianMatrix):
    """A Hermitian positive definite matrix.

    Positivity is strict: construction fails unless the matrix admits a
    Cholesky factorization (equivalently, its smallest eigenvalue as
    computed is positive).
    """

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        try:
            np.linalg.cholesky(self.mat)
        except np.linalg.LinAlgError:
            lam, _ = _eigh(self.mat)
            raise DomainError(
                f"matrix is not positive definite (lambda_min = {lam[0]:.6e})"
            ) from None


def identity(m: int) -> HpdMatrix:
    return HpdMatrix(np.eye(m))


def is_positive_definite(h: HermitianMatrix) -> bool:
    try:
        np.linalg.cholesky(h.mat)
    except np.linalg.LinAlgError:
        return False
    return True


def as_hpd(h: HermitianMatrix) -> HpdMatrix:
    """Lift a Hermitian matrix to HPD, failing if it is not."""
    return h if isinstance(h, HpdMatrix) else HpdMatrix(h.mat)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending real eigenvalues and a unitary matrix of eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return _from_eig(self.eigenvalues, self.eigenvectors)


def eig_hermitian(h: HermitianMatrix) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Deterministic for identical input.  The result satisfies
    ``||V diag(lam) V* - H|| <= 1e-12 * max(1, ||H||)`` and
    ``||V* V - I|| <= 1e-12`` in the operator norm.
    """
    lam, v = _eigh(h.mat)
    lam.flags.writeable = False
    v.flags.writeable = False
    return EigenDecomposition(lam, v)


@dataclass(frozen=True)
class ScalarFunctionSpec:
    """A scalar function lifted to Hermitian matrices through the spectrum.

    ``kind`` is one of ``"power"`` (with exponent ``p``), ``"log"`` or
    ``"exp"``.  Log and non-integer powers require a positive spectrum.
    """

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in ("power", "log", "exp"):
            raise DomainError(f"unknown spectral function kind {self.kind!r}")
        if self.kind == "power":
            if self.p is None or not math.isfinite(self.p):
                raise DomainError("power requires a finite exponent")
        elif self.p is not None:
            raise DomainError(f"{self.kind} takes no exponent")

    @staticmethod
    def power(p: float) -> "ScalarFunctionSpec":
        return ScalarFunctionSpec("power", float(p))

    @staticmethod
    def log() -> "ScalarFunctionSpec":
        return ScalarFunctionSpec("log")

    @staticmethod
    def exp() -> "ScalarFunctionSpec":
        return ScalarFunctionSpec("exp")


def _apply_fn_nd(lam: np.ndarray, v: np.ndarray, fn: ScalarFunctionSpec) -> np.ndarray:
    if fn.kind == "log":
        if lam[0] <= 0.0:
            raise DomainError(f"log requires a positive spectrum (lambda_min = {lam[0]:.6e})")
        mapped = np.log(lam)
    elif fn.kind == "exp":
        mapped = np.exp(lam)
    else:
        p = fn.p
        if p == 1.0:
            mapped = lam
        elif float(p).is_integer():
            if p < 0 and np.any(lam == 0.0):
                raise DomainError("negative power of a singular matrix")
            mapped = lam ** p
        else:
            if lam[0] <= 0.0:
                raise DomainError(
                    f"non-integer power requires a positive spectrum "
                    f"(lambda_min = {lam[0]:.6e})"
                )
            mapped = lam ** p
    return _from_eig(mapped, v)


def apply_spectral_fn(h: HermitianMatrix, fn: ScalarFunctionSpec) -> HermitianMatrix:
    """Apply ``fn`` through the eigendecomposition: V diag(fn(lam)) V*.

    Returns an :class:`HpdMatrix` whenever the mapped spectrum is positive,
    a plain :class:`HermitianMatrix` otherwise.
    """
    lam, v = _eigh(h.mat)
    out = _apply_fn_nd(lam, v, fn)
    try:
        return HpdMatrix(out)
    except DomainError:
        return HermitianMatrix(out)


def powm(h: HermitianMatrix, p: float) -> HermitianMatrix:
    """Spectral power ``h**p`` (HPD result for HPD input)."""
    return apply_spectral_fn(h, ScalarFunctionSpec.power(p))


def logm(a: HpdMatrix) -> HermitianMatrix:
    """Spectral logarithm of an HPD matrix."""
    return apply_spectral_fn(a, ScalarFunctionSpec.log())


def expm(h: HermitianMatrix) -> HpdMatrix:
    """Spectral exponential of a Hermitian matrix; always HPD."""
    out = apply_spectral_fn(h, ScalarFunctionSpec.exp())
    return as_hpd(out)


def congruence(m_factor, a: HpdMatrix) -> HpdMatrix:
    """Congruence transform M A M* by an invertible matrix M."""
    m = np.asarray(m_factor, dtype=np.complex128)
    if m.shape != a.mat.shape:
        raise DomainError(f"factor shape {m.shape} does not match dim {a.dim}")
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        ratio = sv[-1] / sv[0] if sv[0] > 0 else 0.0
        raise DomainError(
            f"congruence factor is numerically singular "
            f"(sigma_min/sigma_max = {ratio:.3e})"
        )
    return HpdMatrix(_sym(m @ a.mat @ m.conj().T))


def operator_norm(h: HermitianMatrix) -> float:
    """Operator (spectral) norm: max |eigenvalue|."""
    lam, _ = _eigh(h.mat)
    return float(np.abs(lam).max())


def log_det(a: HpdMatrix) -> float:
    """Sum of the logs of the eigenvalues."""
    lam, _ = _eigh(a.mat)
    return float(np.log(lam).sum())


def trace(h: HermitianMatrix) -> float:
    return float(np.trace(h.mat).real)

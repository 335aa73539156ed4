"""Seeded generators of structured test instances.

Every sampler is a pure function of a :class:`SamplerSpec`.  Randomness
comes from the Philox 4x64 counter-based generator; the 128-bit Philox key
is ``(spec.seed, blake2b(purpose_label))`` so each sampler owns its own
stream and adding a new sampler never perturbs existing ones.  Replays
with the same spec are bit-identical.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from .hpd import DomainError, HermitianMatrix, HpdMatrix, _eigh, _sym
from .multi_means import MatrixTuple, WeightVector

MAX_SAMPLER_DIM = 16


@dataclass(frozen=True)
class SamplerSpec:
    """Seeded description of one generated instance.

    ``spectrum_range`` bounds the eigenvalues of generated HPD matrices
    (drawn log-uniformly), ``count`` is the number of trials when a spec
    drives a suite run.
    """

    seed: int
    dim: int
    spectrum_range: tuple[float, float] = (0.2, 5.0)
    count: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.dim <= MAX_SAMPLER_DIM:
            raise DomainError(f"dim must lie in [1, {MAX_SAMPLER_DIM}]")
        lo, hi = self.spectrum_range
        if not (0.0 < lo <= hi):
            raise DomainError("spectrum_range must satisfy 0 < lo <= hi")
        if self.count < 1:
            raise DomainError("count must be at least 1")


def _label_key(label: str) -> int:
    return int.from_bytes(
        hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest(), "big"
    )


def derive_seed(seed: int, *parts) -> int:
    """Deterministically mix a base seed with labels/indices into a new seed."""
    h = hashlib.blake2b(digest_size=8)
    h.update(seed.to_bytes(8, "big"))
    for part in parts:
        h.update(repr(part).encode("utf-8"))
        h.update(b"\x00")
    return int.from_bytes(h.digest(), "big")


def _stream(spec: SamplerSpec, label: str) -> np.random.Generator:
    key = np.array([spec.seed, _label_key(label)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _haar_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    phase = np.where(np.abs(d) > 0, d / np.abs(np.where(np.abs(d) > 0, d, 1)), 1.0)
    return q * phase.conj()


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    if lo == hi:
        return np.full(size, lo)
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def _psd(rng: np.random.Generator, m: int, norm: float) -> np.ndarray:
    """Random positive semi-definite matrix with operator norm ``norm``."""
    if norm <= 0.0:
        return np.zeros((m, m), dtype=np.complex128)
    z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    p = _sym(z @ z.conj().T)
    lam, _ = _eigh(p)
    return p * (norm / lam[-1])


def random_hpd(spec: SamplerSpec, label: str = "hpd") -> HpdMatrix:
    """U diag(lam) U* with log-uniform spectrum and a Haar-like unitary."""
    rng = _stream(spec, label)
    lo, hi = spec.spectrum_range
    lam = _log_uniform(rng, lo, hi, spec.dim)
    u = _haar_unitary(rng, spec.dim)
    return HpdMatrix(_sym((u * lam) @ u.conj().T))


def random_hermitian(spec: SamplerSpec, label: str = "hermitian") -> HermitianMatrix:
    """Random Hermitian matrix with eigenvalues uniform in [-hi, hi]."""
    rng = _stream(spec, label)
    hi = spec.spectrum_range[1]
    lam = rng.uniform(-hi, hi, spec.dim)
    u = _haar_unitary(rng, spec.dim)
    return HermitianMatrix(_sym((u * lam) @ u.conj().T))


def random_near_ordered_pair(spec: SamplerSpec) -> tuple[HpdMatrix, HpdMatrix]:
    """A random, B = C A C with C = I + PSD, so A is near-ordered below B.

    The near-order margin is lambda_min(C) - 1 >= 0 by construction, while
    the Loewner comparison of A and B may well fail.
    """
    rng = _stream(spec, "near-pair")
    a = random_hpd(replace(spec, seed=derive_seed(spec.seed, "near-pair-base")))
    norm_cap = max(spec.spectrum_range[1] - 1.0, 0.0)
    c = np.eye(spec.dim) + _psd(rng, spec.dim, rng.uniform(0.0, norm_cap))
    b = _sym(c @ a.mat @ c)
    return a, HpdMatrix(b)


def random_loewner_pair(spec: SamplerSpec) -> tuple[HpdMatrix, HpdMatrix]:
    """A random, B = A + PSD perturbation, so A <= B in the Loewner order."""
    rng = _stream(spec, "loewner-pair")
    a = random_hpd(replace(spec, seed=derive_seed(spec.seed, "loewner-pair-base")))
    norm = rng.uniform(0.0, max(spec.spectrum_range[1] - spec.spectrum_range[0], 0.0))
    return a, HpdMatrix(a.mat + _psd(rng, spec.dim, norm))


def random_chaotic_pair(spec: SamplerSpec) -> tuple[HpdMatrix, HpdMatrix]:
    """log B = log A + PSD, so log A <= log B in the Loewner order."""
    rng = _stream(spec, "chaotic-pair")
    a = random_hpd(replace(spec, seed=derive_seed(spec.seed, "chaotic-pair-base")))
    lam, v = _eigh(a.mat)
    log_a = _sym((v * np.log(lam)) @ v.conj().T)
    log_b = log_a + _psd(rng, spec.dim, rng.uniform(0.0, 1.5))
    lam_b, v_b = _eigh(log_b)
    return a, HpdMatrix(_sym((v_b * np.exp(lam_b)) @ v_b.conj().T))


def random_unitary(spec: SamplerSpec, label: str = "unitary") -> np.ndarray:
    """Haar-like random unitary matrix."""
    return _haar_unitary(_stream(spec, label), spec.dim)


def random_invertible(spec: SamplerSpec, label: str = "invertible") -> np.ndarray:
    """Random complex Gaussian matrix, resampled until well conditioned."""
    for attempt in range(64):
        rng = _stream(spec, f"{label}/{attempt}")
        z = rng.standard_normal((spec.dim, spec.dim)) + 1j * rng.standard_normal(
            (spec.dim, spec.dim)
        )
        sv = np.linalg.svd(z, compute_uv=False)
        if sv[-1] > 1e-6 * sv[0]:
            return z
    raise DomainError("could not draw a well-conditioned matrix")  # pragma: no cover


def random_commuting_loewner_pair(spec: SamplerSpec) -> tuple[HpdMatrix, HpdMatrix]:
    """Commuting pair with A <= B: one eigenbasis, entrywise growth factors."""
    rng = _stream(spec, "commuting-loewner-pair")
    lo, hi = spec.spectrum_range
    u = _haar_unitary(rng, spec.dim)
    lam_a = _log_uniform(rng, lo, hi, spec.dim)
    lam_b = lam_a * np.exp(rng.uniform(0.0, 1.0, spec.dim))
    a = HpdMatrix(_sym((u * lam_a) @ u.conj().T))
    b = HpdMatrix(_sym((u * lam_b) @ u.conj().T))
    return a, b


def random_commuting_family(spec: SamplerSpec, n: int) -> MatrixTuple:
    """n HPD matrices sharing one random eigenbasis; pairwise commuting."""
    if n < 1:
        raise DomainError("family size must be at least 1")
    rng = _stream(spec, "commuting-family")
    lo, hi = spec.spectrum_range
    u = _haar_unitary(rng, spec.dim)
    items = []
    for _ in range(n):
        lam = _log_uniform(rng, lo, hi, spec.dim)
        items.append(HpdMatrix(_sym((u * lam) @ u.conj().T)))
    return MatrixTuple(tuple(items))


def random_tuple(spec: SamplerSpec, n: int) -> MatrixTuple:
    """n independent random HPD matrices of the spec's dimension."""
    if n < 1:
        raise DomainError("tuple size must be at least 1")
    items = tuple(
        random_hpd(replace(spec, seed=derive_seed(spec.seed, "tuple", j)))
        for j in range(n)
    )
    return MatrixTuple(items)


def random_weights(spec: SamplerSpec, n: int) -> WeightVector:
    """Strictly positive weights, entries drawn uniform then normalized."""
    rng = _stream(spec, "weights")
    return WeightVector(tuple(rng.uniform(0.2, 1.0, n)))


def random_curve_family(spec: SamplerSpec, n: int) -> list:
    """n exponential curves through I with generator norms at most 1."""
    from .asymptotics import Curve

    if n < 1:
        raise DomainError("family size must be at least 1")
    out = []
    for j in range(n):
        rng = _stream(spec, f"curve/{j}")
        lam = rng.uniform(-1.0, 1.0, spec.dim)
        u = _haar_unitary(rng, spec.dim)
        out.append(Curve(HermitianMatrix(_sym((u * lam) @ u.conj().T))))
    return out

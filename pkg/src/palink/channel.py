"""Calibrated complex AWGN and the simulator's seeded-randomness contract.

Noise is calibrated per information bit: for average symbol energy Es and
per-bit SNR gamma = 10^(ebn0_db/10), N0 = Es/(bits_per_symbol * gamma) and
each of I and Q receives zero-mean Gaussian noise of variance N0/2.

Randomness uses numpy's PCG64 generator.  Independent streams are derived
by hashing (master seed, context parts) with SHA-256, so per-point streams
are reproducible and never shared between workers.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseSpec",
    "make_rng",
    "derive_seed",
    "derive_rng",
    "awgn",
    "gaussian_pairs",
]


@dataclass(frozen=True)
class NoiseSpec:
    """Per-bit SNR in dB (math.inf disables noise) and bits per symbol."""

    ebn0_db: float
    bits_per_symbol: int

    def __post_init__(self) -> None:
        if math.isnan(self.ebn0_db):
            raise ValueError("ebn0_db must not be NaN")
        if self.bits_per_symbol < 1:
            raise ValueError("bits_per_symbol must be >= 1")

    def noise_density(self, es: float = 1.0) -> float:
        """N0 for symbols of average energy es."""
        gamma = 10.0 ** (self.ebn0_db / 10.0)
        return es / (self.bits_per_symbol * gamma)

    def sigma(self, es: float = 1.0) -> float:
        """Per-component noise standard deviation, sqrt(N0/2)."""
        return math.sqrt(self.noise_density(es) / 2.0)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; identical seed gives an identical sample sequence."""
    return np.random.default_rng(seed)


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit sub-seed from a master seed and context parts.

    SHA-256 of the canonical textual key, truncated to 8 bytes; stable
    across runs, platforms, and Python versions.
    """
    key = "|".join([str(int(master_seed))] + [repr(p) for p in parts])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(master_seed: int, *parts) -> np.random.Generator:
    """Generator on an independent stream keyed by (master seed, parts)."""
    return make_rng(derive_seed(master_seed, *parts))


def gaussian_pairs(n: int, rng: np.random.Generator) -> np.ndarray:
    """n complex unit-variance-per-component samples from 2n ordered draws.

    Draw 2k feeds the real part and draw 2k+1 the imaginary part of
    sample k.
    """
    z = rng.standard_normal(2 * n)
    return z[0::2] + 1j * z[1::2]


def awgn(symbols, spec: NoiseSpec, rng: np.random.Generator, es: float = 1.0):
    """Add complex AWGN calibrated to the requested per-bit SNR.

    es is the average symbol energy of the input (1 for an undistorted
    unit-energy constellation).  Consumes exactly 2*len(symbols) Gaussian
    draws; with ebn0_db = inf the input is returned unchanged and no
    draws are consumed.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if math.isinf(spec.ebn0_db):
        return symbols.copy()
    return symbols + spec.sigma(es) * gaussian_pairs(symbols.size, rng)

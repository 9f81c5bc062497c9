"""Gray-coded MPSK/MQAM mapping and hard-decision demapping.

Constellations have unit average energy.  Bit groups are taken MSB first;
for QAM the first half of each group drives the I rail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModScheme",
    "Constellation",
    "build_constellation",
    "map_bits",
    "demap",
    "count_bit_errors",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _gray_decode(g: int) -> int:
    """Inverse of the binary-reflected Gray code g = b ^ (b >> 1)."""
    b = 0
    while g:
        b ^= g
        g >>= 1
    return b


@dataclass(frozen=True)
class ModScheme:
    """Modulation family ('psk' or 'qam') and constellation order m."""

    family: str
    m: int

    def __post_init__(self) -> None:
        if self.family not in ("psk", "qam"):
            raise ValueError(f"unknown modulation family {self.family!r}")
        if not _is_power_of_two(self.m) or self.m < 2:
            raise ValueError(f"m={self.m} must be a power of 2, >= 2")
        if self.family == "qam":
            k = self.m.bit_length() - 1
            if k % 2 != 0 or self.m < 4:
                raise ValueError(
                    f"QAM requires a square constellation (m = 4, 16, 64, ...), got {self.m}"
                )

    @property
    def bits_per_symbol(self) -> int:
        return self.m.bit_length() - 1


@dataclass(frozen=True)
class Constellation:
    """Ordered symbol points; the array index is the integer bit label."""

    points: np.ndarray
    labels: tuple[tuple[int, ...], ...]


def build_constellation(scheme: ModScheme) -> Constellation:
    """Construct the unit-average-energy Gray-labeled constellation.

    PSK: label b is placed at ring position p with b = p ^ (p >> 1), so
    walking the ring visits labels in Gray-code order and neighbors differ
    in one bit.  QAM: the bit group splits evenly into I and Q halves,
    each half Gray-labels the PAM levels {-(L-1), ..., -1, +1, ..., L-1}
    the same way; the grid is scaled by 1/sqrt(2(m-1)/3).
    """
    m = scheme.m
    k = scheme.bits_per_symbol
    points = np.empty(m, dtype=complex)
    if scheme.family == "psk":
        for label in range(m):
            pos = _gray_decode(label)
            points[label] = np.exp(2j * np.pi * pos / m)
        if m == 2:
            # avoid -1e-16j residue on the BPSK point at angle pi
            points = np.sign(points.real).astype(complex)
    else:
        half = k // 2
        levels = 1 << half
        scale = np.sqrt(2.0 * (m - 1) / 3.0)
        for label in range(m):
            hi = label >> half
            lo = label & (levels - 1)
            ai = 2 * _gray_decode(hi) - (levels - 1)
            aq = 2 * _gray_decode(lo) - (levels - 1)
            points[label] = (ai + 1j * aq) / scale
    labels = tuple(
        tuple((label >> (k - 1 - i)) & 1 for i in range(k)) for label in range(m)
    )
    return Constellation(points=points, labels=labels)


def _bits_to_labels(bits: np.ndarray, k: int) -> np.ndarray:
    weights = 1 << np.arange(k - 1, -1, -1)
    return bits.reshape(-1, k) @ weights


def _labels_to_bits(labels: np.ndarray, k: int) -> np.ndarray:
    shifts = np.arange(k - 1, -1, -1)
    return ((labels[:, None] >> shifts) & 1).reshape(-1)


def map_bits(bits, scheme: ModScheme) -> np.ndarray:
    """Map a bit sequence (MSB-first groups) onto constellation symbols."""
    bits = np.asarray(bits, dtype=np.int64)
    k = scheme.bits_per_symbol
    if bits.size % k != 0:
        raise ValueError(
            f"bit count {bits.size} not divisible by bits/symbol {k}"
        )
    const = build_constellation(scheme)
    labels = _bits_to_labels(bits, k)
    return const.points[labels]


def demap(symbols, scheme: ModScheme) -> np.ndarray:
    """Hard-decision demap to bits via the Euclidean-nearest point.

    Ties break toward the lowest point index, so the decision is
    deterministic.
    """
    symbols = np.asarray(symbols, dtype=complex)
    const = build_constellation(scheme)
    d2 = np.abs(symbols[:, None] - const.points[None, :]) ** 2
    labels = np.argmin(d2, axis=1)
    return _labels_to_bits(labels, scheme.bits_per_symbol)


def count_bit_errors(sent, received) -> int:
    """Hamming distance between two equal-length bit sequences."""
    sent = np.asarray(sent)
    received = np.asarray(received)
    if sent.shape != received.shape:
        raise ValueError(
            f"length mismatch: {sent.shape} vs {received.shape}"
        )
    return int(np.count_nonzero(sent != received))

"""Monte Carlo BER sweeps through the modulate/amplify/noise/demap chain.

Each SNR point runs on its own derived random streams, accumulates bit
errors block by block, and stops once enough errors are seen or the bit
budget is spent.  Theoretical BER formulas for the linear chain serve as
validation oracles; with the amplifier in the chain no closed form
applies and the theory field is left absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erfc

from palink.amp_model import PaParams, amplify_complex, derive_coeffs
from palink.channel import NoiseSpec, awgn, derive_rng, derive_seed, gaussian_pairs
from palink.modem import ModScheme, build_constellation, count_bit_errors, demap

__all__ = [
    "Stopping",
    "PaChain",
    "SweepConfig",
    "BerRecord",
    "run_point",
    "run_sweep",
    "scatter_capture",
    "theoretical_ber",
    "warped_constellation",
]

MODES = ("linear-chain", "pa-fixed-drive", "pa-drive-sweep")

# Symbols simulated per block before the stopping rule is re-checked.
_BLOCK_SYMBOLS = 65536


@dataclass(frozen=True)
class Stopping:
    """Stop a point at min_bit_errors errors or max_bits bits, whichever first."""

    min_bit_errors: int = 100
    max_bits: int = 10_000_000

    def __post_init__(self) -> None:
        if self.min_bit_errors < 1:
            raise ValueError("min_bit_errors must be >= 1")
        if self.max_bits < 1:
            raise ValueError("max_bits must be >= 1")


@dataclass(frozen=True)
class PaChain:
    """Amplifier placement in the chain: parameters plus input drive level.

    Symbols are scaled by 10^(drive_db/20) before the amplifier and the
    receiver divides by the fixed linear reference a1 * drive, so any
    compression shows up as residual distortion.
    """

    params: PaParams
    drive_db: float = 0.0
    clamp: bool = True


@dataclass(frozen=True)
class SweepConfig:
    """One BER experiment: scheme, SNR grid, stopping rule, seed, PA mode."""

    scheme: ModScheme
    snr_points_db: tuple[float, ...]
    stopping: Stopping = Stopping()
    master_seed: int = 0
    pa: PaChain | None = None
    mode: str = "linear-chain"

    def __post_init__(self) -> None:
        pts = tuple(float(s) for s in self.snr_points_db)
        object.__setattr__(self, "snr_points_db", pts)
        if len(pts) == 0:
            raise ValueError("snr_points_db must be non-empty")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("snr_points_db must be strictly increasing")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.stopping.max_bits < self.scheme.bits_per_symbol:
            raise ValueError("max_bits smaller than one symbol's worth of bits")


@dataclass(frozen=True)
class BerRecord:
    """One measured point.  theory_ber is None whenever the PA is active."""

    snr_db: float
    bits_simulated: int
    bit_errors: int
    ber: float
    theory_ber: float | None


def _q(x: float) -> float:
    """Gaussian tail probability Q(x)."""
    return float(0.5 * erfc(x / math.sqrt(2.0)))


def theoretical_ber(scheme: ModScheme, ebn0_db: float) -> float:
    """Standard linear-chain BER under Gray labeling.

    BPSK/QPSK are exact; MPSK (m > 4) and square MQAM use the usual
    nearest-neighbor approximations.
    """
    gamma = 10.0 ** (ebn0_db / 10.0)
    k = scheme.bits_per_symbol
    if scheme.family == "psk":
        if scheme.m <= 4:
            return _q(math.sqrt(2.0 * gamma))
        return (2.0 / k) * _q(math.sqrt(2.0 * k * gamma) * math.sin(math.pi / scheme.m))
    return (
        (4.0 / k)
        * (1.0 - 1.0 / math.sqrt(scheme.m))
        * _q(math.sqrt(3.0 * k * gamma / (scheme.m - 1)))
    )


def warped_constellation(scheme: ModScheme, pa: PaChain) -> np.ndarray:
    """Constellation after drive scaling, the amplifier, and the linear
    reference division.  Deterministic; used for noise calibration in
    drive-sweep mode and as a compression oracle in tests."""
    coeffs = derive_coeffs(pa.params)
    drive = 10.0 ** (pa.drive_db / 20.0)
    points = build_constellation(scheme).points * drive
    return amplify_complex(points, coeffs, pa.clamp) / (coeffs.a1 * drive)


def _warped_mean_energy(scheme: ModScheme, pa: PaChain) -> float:
    coeffs = derive_coeffs(pa.params)
    drive = 10.0 ** (pa.drive_db / 20.0)
    amplified = amplify_complex(build_constellation(scheme).points * drive, coeffs, pa.clamp)
    return float(np.mean(np.abs(amplified) ** 2))


def run_point(
    scheme: ModScheme,
    snr_db: float,
    stopping: Stopping,
    seed: int,
    pa: PaChain | None = None,
    noise_sigma: float | None = None,
) -> BerRecord:
    """Measure BER at one SNR point.

    noise_sigma, when given, fixes the per-component noise deviation
    directly (drive-sweep mode); otherwise noise is calibrated to the
    per-block average symbol energy after the amplifier (or to 1 for the
    linear chain).
    """
    k = scheme.bits_per_symbol
    const = build_constellation(scheme)
    weights = 1 << np.arange(k - 1, -1, -1)
    rng_bits = derive_rng(seed, "bits")
    rng_noise = derive_rng(seed, "noise")

    if pa is not None:
        coeffs = derive_coeffs(pa.params)
        drive = 10.0 ** (pa.drive_db / 20.0)
        reference = coeffs.a1 * drive

    bits_total = 0
    errors = 0
    while True:
        n_bits = min(_BLOCK_SYMBOLS * k, stopping.max_bits - bits_total)
        n_syms = n_bits // k
        if n_syms == 0:
            break
        bits = rng_bits.integers(0, 2, size=n_syms * k)
        tx = const.points[bits.reshape(-1, k) @ weights]

        if pa is not None:
            x = amplify_complex(tx * drive, coeffs, pa.clamp)
        else:
            x = tx

        if noise_sigma is not None:
            y = x if noise_sigma == 0.0 else x + noise_sigma * gaussian_pairs(n_syms, rng_noise)
        elif math.isinf(snr_db):
            y = x
        else:
            es = float(np.mean(np.abs(x) ** 2)) if pa is not None else 1.0
            y = awgn(x, NoiseSpec(snr_db, k), rng_noise, es=es)

        if pa is not None:
            y = y / reference

        rx_bits = demap(y, scheme)
        errors += count_bit_errors(bits, rx_bits)
        bits_total += n_syms * k
        if errors >= stopping.min_bit_errors or bits_total >= stopping.max_bits:
            break

    theory = theoretical_ber(scheme, snr_db) if pa is None else None
    return BerRecord(
        snr_db=float(snr_db),
        bits_simulated=bits_total,
        bit_errors=errors,
        ber=errors / bits_total,
        theory_ber=theory,
    )


def run_sweep(config: SweepConfig) -> list[BerRecord]:
    """Run the configured sweep, one independently seeded point per SNR.

    In pa-drive-sweep mode the noise deviation is frozen at its value for
    the first SNR point (calibrated to the warped constellation's average
    energy at the base drive) and the drive is raised by the SNR increment
    in dB for each later point, so rising signal energy pushes the
    amplifier into compression.
    """
    pa_active = config.pa is not None and config.mode != "linear-chain"
    noise_sigma = None
    if pa_active and config.mode == "pa-drive-sweep":
        snr0 = config.snr_points_db[0]
        if math.isinf(snr0):
            noise_sigma = 0.0
        else:
            es0 = _warped_mean_energy(config.scheme, config.pa)
            gamma0 = 10.0 ** (snr0 / 10.0)
            noise_sigma = math.sqrt(es0 / (2.0 * config.scheme.bits_per_symbol * gamma0))

    records = []
    for index, snr_db in enumerate(config.snr_points_db):
        seed = derive_seed(
            config.master_seed, config.scheme.family, config.scheme.m, index, "point"
        )
        if not pa_active:
            records.append(run_point(config.scheme, snr_db, config.stopping, seed))
            continue
        pa = config.pa
        if config.mode == "pa-drive-sweep":
            pa = replace(pa, drive_db=pa.drive_db + (snr_db - config.snr_points_db[0]))
        records.append(
            run_point(config.scheme, snr_db, config.stopping, seed, pa, noise_sigma)
        )
    return records


def scatter_capture(
    scheme: ModScheme,
    n_symbols: int,
    seed: int,
    pa: PaChain | None = None,
    snr_db: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Aligned (pre-chain, post-chain) symbol pairs for scatter plots.

    Post-chain symbols are normalized by the linear reference gain, so a
    compressed amplifier pulls the outer points visibly inward relative
    to the pre-chain constellation.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    k = scheme.bits_per_symbol
    const = build_constellation(scheme)
    weights = 1 << np.arange(k - 1, -1, -1)
    rng_bits = derive_rng(seed, "bits")
    rng_noise = derive_rng(seed, "noise")
    bits = rng_bits.integers(0, 2, size=n_symbols * k)
    pre = const.points[bits.reshape(-1, k) @ weights]

    x = pre
    reference = 1.0
    if pa is not None:
        coeffs = derive_coeffs(pa.params)
        drive = 10.0 ** (pa.drive_db / 20.0)
        reference = coeffs.a1 * drive
        x = amplify_complex(pre * drive, coeffs, pa.clamp)
    if snr_db is not None and not math.isinf(snr_db):
        es = float(np.mean(np.abs(x) ** 2)) if pa is not None else 1.0
        x = awgn(x, NoiseSpec(snr_db, k), rng_noise, es=es)
    post = x / reference
    return pre, post

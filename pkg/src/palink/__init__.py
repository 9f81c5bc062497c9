"""Link-level simulator for RF power-amplifier gain compression studies.

Fits a memoryless cubic amplifier model from datasheet numbers (gain and
the 1 dB compression point), runs Gray-coded MPSK/MQAM over AWGN, and
measures the BER degradation the nonlinearity causes.
"""

__version__ = "0.1.0"

from palink.amp_model import (
    HarmonicAmps,
    PaParams,
    PolyCoeffs,
    am_am_curve,
    amplify_complex,
    amplify_real,
    derive_coeffs,
    harmonic_analysis,
)
from palink.ber_harness import (
    BerRecord,
    PaChain,
    Stopping,
    SweepConfig,
    run_point,
    run_sweep,
    scatter_capture,
    theoretical_ber,
)
from palink.channel import NoiseSpec, awgn, derive_rng, derive_seed, make_rng
from palink.modem import (
    Constellation,
    ModScheme,
    build_constellation,
    count_bit_errors,
    demap,
    map_bits,
)

__all__ = [
    "HarmonicAmps",
    "PaParams",
    "PolyCoeffs",
    "am_am_curve",
    "amplify_complex",
    "amplify_real",
    "derive_coeffs",
    "harmonic_analysis",
    "BerRecord",
    "PaChain",
    "Stopping",
    "SweepConfig",
    "run_point",
    "run_sweep",
    "scatter_capture",
    "theoretical_ber",
    "NoiseSpec",
    "awgn",
    "derive_rng",
    "derive_seed",
    "make_rng",
    "Constellation",
    "ModScheme",
    "build_constellation",
    "count_bit_errors",
    "demap",
    "map_bits",
]

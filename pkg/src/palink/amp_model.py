"""Memoryless cubic power-amplifier model fitted from datasheet parameters.

The amplifier is y = a1*x + a3*x^3 with a1 from the small-signal gain and
a3 chosen so the output at the 1 dB compression point is exactly 1 dB below
the extrapolated linear output.  All signals are voltages in a normalized
1-ohm system: power in dB is 20*log10(|V|), and datasheet dBm digits are
used directly as dB values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PaParams",
    "PolyCoeffs",
    "HarmonicAmps",
    "derive_coeffs",
    "amplify_real",
    "amplify_complex",
    "am_am_curve",
    "harmonic_analysis",
]

# HMC413 datasheet values used as defaults throughout the tool.
DEFAULT_GAIN_DB = 23.0
DEFAULT_P1DB_DB = 27.0
DEFAULT_PSAT_DB = 29.5


@dataclass(frozen=True)
class PaParams:
    """Datasheet-style amplifier parameters.

    gain_db:  small-signal gain in dB
    p1db_db:  output power at the 1 dB compression point (dB re normalized volts)
    psat_db:  saturated output power in dB; used only as a consistency check
    """

    gain_db: float
    p1db_db: float
    psat_db: float

    def __post_init__(self) -> None:
        for name in ("gain_db", "p1db_db", "psat_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"PaParams.{name} must be finite")
        if self.psat_db <= self.p1db_db:
            raise ValueError(
                f"psat_db ({self.psat_db}) must lie above p1db_db ({self.p1db_db})"
            )


@dataclass(frozen=True)
class PolyCoeffs:
    """Fitted cubic coefficients plus the derived saturation point.

    a1 is the dimensionless voltage gain, a3 (negative) the compression
    term.  x_sat is the input voltage where dy/dx = 0; beyond it the raw
    cubic bends back down, so the default amplify path clamps at y_sat.
    """

    a1: float
    a3: float
    x_sat: float
    y_sat: float


@dataclass(frozen=True)
class HarmonicAmps:
    """Harmonic amplitudes (volts) of the amplified sinusoid.

    With no even-order term the DC and second-harmonic amplitudes are
    identically zero.
    """

    dc: float
    fundamental: float
    second: float
    third: float


def derive_coeffs(params: PaParams) -> PolyCoeffs:
    """Fit (a1, a3) from gain and the 1 dB compression point.

    a1 = 10^(gain_db/20).  The input voltage at 1 dB compression is
    x1 = 10^((p1db+1)/20)/a1 (the level whose *linear* output would be
    1 dB above p1db); the actual output there is y1 = 10^(p1db/20), and
    a3 = (y1 - a1*x1)/x1^3 makes the cubic pass through that point.
    """
    a1 = 10.0 ** (params.gain_db / 20.0)
    x1 = 10.0 ** ((params.p1db_db + 1.0) / 20.0) / a1
    y1 = 10.0 ** (params.p1db_db / 20.0)
    a3 = (y1 - a1 * x1) / x1**3
    x_sat = math.sqrt(-a1 / (3.0 * a3))
    y_sat = (2.0 / 3.0) * a1 * x_sat
    return PolyCoeffs(a1=a1, a3=a3, x_sat=x_sat, y_sat=y_sat)


def compression_input_voltage(params: PaParams) -> float:
    """Input voltage at the 1 dB compression point for the fitted model."""
    a1 = 10.0 ** (params.gain_db / 20.0)
    return 10.0 ** ((params.p1db_db + 1.0) / 20.0) / a1


def amplify_real(v, coeffs: PolyCoeffs, clamp: bool = True):
    """Apply the cubic to a real voltage (scalar or array).

    With clamp on (default), inputs beyond x_sat saturate at +-y_sat;
    with clamp off the raw cubic is returned everywhere (needed for the
    harmonic FFT oracle).  Odd symmetry holds exactly in both modes.
    """
    arr = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("amplify_real requires finite input")
    y = coeffs.a1 * arr + coeffs.a3 * arr**3
    if clamp:
        y = np.where(np.abs(arr) > coeffs.x_sat, np.sign(arr) * coeffs.y_sat, y)
    if y.ndim == 0:
        return float(y)
    return y


def amplify_complex(s, coeffs: PolyCoeffs, clamp: bool = True):
    """Amplify the I and Q components independently.

    The model distorts each rail separately, so both amplitude and phase
    of the complex symbol are affected.
    """
    arr = np.asarray(s, dtype=complex)
    out = amplify_real(arr.real, coeffs, clamp) + 1j * np.asarray(
        amplify_real(arr.imag, coeffs, clamp)
    )
    if arr.ndim == 0:
        return complex(out)
    return out


def am_am_curve(
    coeffs: PolyCoeffs,
    pin_db_start: float,
    pin_db_stop: float,
    steps: int,
) -> list[tuple[float, float, float]]:
    """Sweep input power and tabulate (pin_db, pout_db, gain_db).

    Output power flattens at 20*log10(y_sat) once the input passes x_sat.
    """
    if not (math.isfinite(pin_db_start) and math.isfinite(pin_db_stop)):
        raise ValueError("am_am_curve grid endpoints must be finite")
    if pin_db_start >= pin_db_stop:
        raise ValueError("am_am_curve needs pin_db_start < pin_db_stop")
    if steps < 2:
        raise ValueError("am_am_curve needs at least 2 grid points")
    pin_db = np.linspace(pin_db_start, pin_db_stop, steps)
    vin = 10.0 ** (pin_db / 20.0)
    vout = amplify_real(vin, coeffs, clamp=True)
    pout_db = 20.0 * np.log10(vout)
    gain_db = pout_db - pin_db
    return [
        (float(p), float(po), float(g)) for p, po, g in zip(pin_db, pout_db, gain_db)
    ]


def harmonic_analysis(coeffs: PolyCoeffs, amplitude: float) -> HarmonicAmps:
    """Closed-form harmonic amplitudes for a sinusoid of the given amplitude.

    Valid only up to x_sat, where the unclamped cubic expansion applies:
    fundamental = a1*A + (3/4)*a3*A^3, third = (1/4)*a3*A^3.
    """
    if not (amplitude > 0.0 and math.isfinite(amplitude)):
        raise ValueError("amplitude must be positive and finite")
    if amplitude > coeffs.x_sat:
        raise ValueError(
            f"amplitude {amplitude} exceeds x_sat {coeffs.x_sat}; "
            "closed form invalid once clamping engages"
        )
    a = amplitude
    fundamental = coeffs.a1 * a + 0.75 * coeffs.a3 * a**3
    third = 0.25 * coeffs.a3 * a**3
    return HarmonicAmps(dc=0.0, fundamental=fundamental, second=0.0, third=third)

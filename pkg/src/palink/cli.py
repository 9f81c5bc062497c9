"""Command-line front end: ber-sweep, amam, and scatter subcommands.

Each command resolves its configuration, runs the experiment, writes a
JSON manifest (config, seed, output digests) first, and then the CSV data
files via write-temp-then-rename so a failure never leaves partial data
behind.  Floats are written with shortest round-trip precision, so reruns
with identical flags produce byte-identical files.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numeric/config error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass

from palink import __version__
from palink.amp_model import (
    DEFAULT_GAIN_DB,
    DEFAULT_P1DB_DB,
    DEFAULT_PSAT_DB,
    PaParams,
    am_am_curve,
    amplify_real,
    derive_coeffs,
)
from palink.ber_harness import PaChain, Stopping, SweepConfig, run_sweep, scatter_capture
from palink.modem import ModScheme

__all__ = ["main", "entry"]

# Recorded as metadata only; the simulation is symbol-level and has no
# real-time clock.
DATA_RATE_BPS = 30000


@dataclass(frozen=True)
class Grid:
    """Inclusive start:step:stop grid of float values."""

    text: str
    values: tuple[float, ...]


def parse_grid(text: str) -> Grid:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid {text!r} is not start:step:stop")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid {text!r}: {exc}") from None
    if not all(math.isfinite(v) for v in (start, step, stop)):
        raise argparse.ArgumentTypeError(f"grid {text!r} has non-finite values")
    if step <= 0 or stop <= start:
        raise argparse.ArgumentTypeError(f"grid {text!r} is degenerate")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return Grid(text=text, values=tuple(start + i * step for i in range(n)))


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _atomic_write(path: str, content: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)
    os.replace(tmp, path)


def _write_outputs(out_dir: str, stem: str, config: dict, files: dict[str, str]) -> None:
    """Write '<stem>.manifest.json' first, then the data files atomically."""
    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "tool": "palink",
        "version": __version__,
        "command": stem.replace("_", "-"),
        "config": config,
        "master_seed": config.get("seed", 0),
        "metadata": {"data_rate_bps": DATA_RATE_BPS},
        "outputs": [
            {
                "path": name,
                "sha256": hashlib.sha256(content.encode("utf-8")).hexdigest(),
            }
            for name, content in sorted(files.items())
        ],
    }
    _atomic_write(
        os.path.join(out_dir, f"{stem}.manifest.json"),
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
    )
    for name, content in sorted(files.items()):
        _atomic_write(os.path.join(out_dir, name), content)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", default=".", help="output directory (default '.')")


def _add_pa_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pa-gain", type=float, default=DEFAULT_GAIN_DB,
                   help="PA small-signal gain in dB (default HMC413: 23)")
    p.add_argument("--pa-p1db", type=float, default=DEFAULT_P1DB_DB,
                   help="PA output power at 1 dB compression (default 27)")
    p.add_argument("--pa-psat", type=float, default=DEFAULT_PSAT_DB,
                   help="PA saturated output power, consistency check only (default 29.5)")
    p.add_argument("--pa-mode", choices=("off", "fixed-drive", "drive-sweep"),
                   default="off", help="amplifier placement mode (default off)")
    p.add_argument("--drive-db", type=float, default=0.0,
                   help="input drive level in dB (default 0)")
    p.add_argument("--clamp", choices=("on", "off"), default="on",
                   help="clamp PA output beyond the cubic turning point (default on)")


def _add_scheme_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", choices=("psk", "qam"), required=True,
                   help="modulation family")
    p.add_argument("--m", type=int, required=True, help="constellation order")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="palink",
        description="Link-level PA gain-compression simulator",
    )
    parser.add_argument("--version", action="version", version=f"palink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ber-sweep", help="Monte Carlo BER vs SNR sweep")
    _add_scheme_flags(p)
    p.add_argument("--snr", type=parse_grid, required=True,
                   help="Eb/N0 grid in dB as start:step:stop (inclusive)")
    p.add_argument("--min-errors", type=int, default=100,
                   help="stop a point after this many bit errors (default 100)")
    p.add_argument("--max-bits", type=int, default=10_000_000,
                   help="bit budget per point (default 1e7)")
    _add_pa_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_ber_sweep)

    p = sub.add_parser("amam", help="AM/AM curve of the fitted amplifier")
    p.add_argument("--pin-db", type=parse_grid, default=parse_grid("-40:0.5:15"),
                   help="input power grid in dB as start:step:stop (default -40:0.5:15)")
    _add_pa_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_amam)

    p = sub.add_parser("scatter", help="pre/post-chain constellation capture")
    _add_scheme_flags(p)
    p.add_argument("--symbols", type=int, default=1000,
                   help="number of symbols to capture (default 1000)")
    p.add_argument("--snr-db", type=float, default=None,
                   help="add AWGN at this Eb/N0 in dB (default: noise off)")
    _add_pa_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_scatter)

    return parser


def _pa_from_args(args) -> tuple[PaChain | None, str]:
    if args.pa_mode == "off":
        return None, "linear-chain"
    params = PaParams(args.pa_gain, args.pa_p1db, args.pa_psat)
    pa = PaChain(params=params, drive_db=args.drive_db, clamp=args.clamp == "on")
    mode = "pa-fixed-drive" if args.pa_mode == "fixed-drive" else "pa-drive-sweep"
    return pa, mode


def cmd_ber_sweep(args) -> int:
    scheme = ModScheme(args.scheme, args.m)
    pa, mode = _pa_from_args(args)
    config = SweepConfig(
        scheme=scheme,
        snr_points_db=args.snr.values,
        stopping=Stopping(args.min_errors, args.max_bits),
        master_seed=args.seed,
        pa=pa,
        mode=mode,
    )
    records = run_sweep(config)
    lines = ["snr_db,bits,errors,ber,theory_ber"]
    for r in records:
        theory = "" if r.theory_ber is None else _fmt(r.theory_ber)
        lines.append(
            f"{_fmt(r.snr_db)},{r.bits_simulated},{r.bit_errors},{_fmt(r.ber)},{theory}"
        )
    _write_outputs(args.out, "ber_sweep", _resolved_config(args),
                   {"ber_sweep.csv": "\n".join(lines) + "\n"})
    return 0


def cmd_amam(args) -> int:
    params = PaParams(args.pa_gain, args.pa_p1db, args.pa_psat)
    coeffs = derive_coeffs(params)
    grid = args.pin_db.values
    rows = am_am_curve(coeffs, grid[0], grid[-1], len(grid))
    power_lines = ["pin_db,pout_db,gain_db"]
    volt_lines = ["vin,vout"]
    for pin_db, pout_db, gain_db in rows:
        power_lines.append(f"{_fmt(pin_db)},{_fmt(pout_db)},{_fmt(gain_db)}")
        vin = 10.0 ** (pin_db / 20.0)
        vout = amplify_real(vin, coeffs, clamp=True)
        volt_lines.append(f"{_fmt(vin)},{_fmt(vout)}")
    _write_outputs(args.out, "amam", _resolved_config(args), {
        "amam.csv": "\n".join(power_lines) + "\n",
        "amam_voltage.csv": "\n".join(volt_lines) + "\n",
    })
    return 0


def cmd_scatter(args) -> int:
    scheme = ModScheme(args.scheme, args.m)
    pa, _mode = _pa_from_args(args)
    pre, post = scatter_capture(
        scheme, args.symbols, args.seed, pa=pa, snr_db=args.snr_db
    )
    lines = ["pre_i,pre_q,post_i,post_q"]
    for a, b in zip(pre, post):
        lines.append(f"{_fmt(a.real)},{_fmt(a.imag)},{_fmt(b.real)},{_fmt(b.imag)}")
    _write_outputs(args.out, "scatter", _resolved_config(args),
                   {"scatter.csv": "\n".join(lines) + "\n"})
    return 0


def _resolved_config(args) -> dict:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "command", "out"):
            continue
        if isinstance(value, Grid):
            value = value.text
        config[key] = value
    config["command"] = args.command
    return config


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"palink: error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"palink: I/O error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

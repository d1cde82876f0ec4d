"""Command-line sweep driver.

Example (window-length comparison over a slow-fading channel with
least-squares channel estimation):

    equalab --detector lmmse,mmse-dfe,amldfbe,mlse --lf 5,10,15 \\
        --l 5 --n 128 --fdts 0.0001 --channel-est ls \\
        --snr-db 0:30:2 --out sweep.csv

Config files passed via --config hold one `key = value` pair per line using
the long flag names without dashes (e.g. `snr-db = 0:20:5`); command-line
flags override the file.
"""

from __future__ import annotations

import argparse
import sys

from .channel import FadingParams
from .harness import (
    ConfigError,
    DetectorSpec,
    SweepConfig,
    analytic_records,
    bound_records,
    ops_records,
    run_sweep,
    write_ops_csv,
    write_records_csv,
)

# Detectors whose behaviour does not depend on the window length; they are
# swept once rather than once per --lf value.
_WINDOWLESS = ("mlse", "exhaustive")

_BOOL_FLAGS = ("analytic", "bound", "ops", "genie", "no-time")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="equalab",
        description="Monte Carlo BER/SER sweeps for block equalizers over "
        "doubly selective Rayleigh fading channels.",
    )
    p.add_argument("--snr-db", default="0:20:5",
                   help="sweep points: 'a:b:step' (inclusive) or 'x,y,z' in dB")
    p.add_argument("--detector", default="amldfbe",
                   help="comma list of detector ids: amldfbe, amldfbe-nomf, "
                        "mlse, lmmse, mmse-dfe, exhaustive")
    p.add_argument("--lf", default="10", help="comma list of forward window lengths")
    p.add_argument("--lb", type=int, default=None,
                   help="feedback length for mmse-dfe (default L-1)")
    p.add_argument("--n", type=int, default=128, help="symbols per frame")
    p.add_argument("--l", type=int, default=5, help="channel impulse response length")
    p.add_argument("--mod", type=int, default=2, help="M-PSK constellation order")
    p.add_argument("--fdts", type=float, default=None,
                   help="normalized Doppler f_d*T_s (overrides physical triple)")
    p.add_argument("--speed-kmh", type=float, default=None, help="terminal speed")
    p.add_argument("--fc-ghz", type=float, default=2.0, help="carrier frequency")
    p.add_argument("--ts", type=float, default=128.0 / 299_792_458.0,
                   help="symbol period in seconds")
    p.add_argument("--channel-est", choices=("perfect", "ls"), default="perfect")
    p.add_argument("--trials", type=int, default=1_000_000,
                   help="maximum frames per sweep point")
    p.add_argument("--min-errors", type=int, default=200,
                   help="stop a point once this many bit errors accumulate")
    p.add_argument("--min-bits", type=int, default=0,
                   help="additionally require this many bits per point")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--chunk", type=int, default=64, help="frames per work chunk")
    p.add_argument("--analytic", action="store_true",
                   help="also emit the frame-averaged analytical BER curve")
    p.add_argument("--analytic-realizations", type=int, default=200)
    p.add_argument("--bound", action="store_true",
                   help="also emit the multipath-diversity SER bound")
    p.add_argument("--ops", action="store_true",
                   help="also write per-detector operation counts to <out>.ops.csv")
    p.add_argument("--genie", action="store_true",
                   help="feed back true symbols instead of decisions")
    p.add_argument("--no-time", action="store_true",
                   help="write wall_seconds=0 for reproducible output files")
    p.add_argument("--out", default="sweep.csv", help="output CSV path")
    p.add_argument("--config", default=None,
                   help="key = value file of defaults (flags override)")
    return p


def parse_snr_list(text: str) -> tuple[float, ...]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad SNR range {text!r}, expected a:b:step")
        try:
            a, b, step = (float(x) for x in parts)
        except ValueError as exc:
            raise ConfigError(f"bad SNR range {text!r}") from exc
        if step <= 0 or b < a:
            raise ConfigError(f"bad SNR range {text!r}")
        out = []
        v = a
        while v <= b + 1e-9:
            out.append(round(v, 9))
            v += step
        return tuple(out)
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad SNR list {text!r}") from exc


def load_config_argv(path: str) -> list[str]:
    """Turn a key=value config file into argv tokens (prepended defaults)."""
    tokens: list[str] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in _BOOL_FLAGS:
                if value.lower() in ("1", "true", "yes", "on"):
                    tokens.append(f"--{key}")
                elif value.lower() not in ("0", "false", "no", "off"):
                    raise ConfigError(f"{path}:{lineno}: bad boolean {value!r}")
            else:
                tokens.extend([f"--{key}", value])
    return tokens


def build_sweep_config(args: argparse.Namespace) -> SweepConfig:
    snrs = parse_snr_list(args.snr_db)
    try:
        lfs = tuple(int(x) for x in str(args.lf).split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad --lf {args.lf!r}") from exc
    if not lfs:
        raise ConfigError("need at least one --lf value")
    ids = tuple(d.strip() for d in args.detector.split(",") if d.strip())
    specs = []
    for det in ids:
        for lf in (lfs[:1] if det in _WINDOWLESS else lfs):
            specs.append(DetectorSpec(det, lf, args.lb))
    if args.fdts is not None:
        fading = FadingParams(normalized_doppler=args.fdts)
    elif args.speed_kmh is not None:
        fading = FadingParams(
            carrier_hz=args.fc_ghz * 1e9,
            symbol_period_s=args.ts,
            speed_mps=args.speed_kmh / 3.6,
        )
    else:
        fading = FadingParams(normalized_doppler=1e-4)
    try:
        return SweepConfig(
            snr_db_list=snrs,
            detectors=tuple(specs),
            n_symbols=args.n,
            n_paths=args.l,
            order=args.mod,
            fading=fading,
            channel_est=args.channel_est,
            trials_max=args.trials,
            min_bit_errors=args.min_errors,
            min_bits=args.min_bits,
            master_seed=args.seed,
            chunk_frames=args.chunk,
            genie_feedback=args.genie,
            measure_time=not args.no_time,
            analytic_realizations=args.analytic_realizations,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # peek at --config so file values become overridable defaults
        pre, _ = parser.parse_known_args(argv)
        if pre.config:
            argv = load_config_argv(pre.config) + argv
        args = parser.parse_args(argv)
        cfg = build_sweep_config(args)
    except ConfigError as exc:
        print(f"equalab: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"equalab: {exc}", file=sys.stderr)
        return 2

    records = run_sweep(cfg)
    if args.analytic:
        records += analytic_records(cfg, cfg.detectors[0].forward_len)
    if args.bound:
        records += bound_records(cfg, cfg.detectors[0].forward_len)
    write_records_csv(records, args.out)
    if args.ops:
        write_ops_csv(ops_records(cfg), f"{args.out}.ops.csv")
    print(f"wrote {len(records)} records to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

    spinbatt <mode> [--n INT] [--b FLOAT] [--omega FLOAT] [--g FLOAT]
                    [--alpha FLOAT] [--coupling nn|lr|none] [--p FLOAT]
                    [--tmax FLOAT] [--samples INT] [--dt FLOAT]
                    [--out PATH] [--workers INT] [--config FILE]
    spinbatt figure <2|3|4|5|6> --out PATH

Exit codes: 0 success, 2 usage error, 3 capacity error, 4 numerical-regime
error.  A plain key=value config file can mirror the flags; explicit flags
take precedence.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import CapacityError, RegimeError, UsageError
from .harness import FIGURE_IDS, MODES, RunConfig, run

_DEFAULTS = {
    "n": 2, "b": 1.0, "omega": 1.0, "g": 0.0, "alpha": 0.0,
    "coupling": "none", "p": 0.0, "tmax": None, "samples": 2000,
    "dt": 1e-3, "out": None, "workers": 1,
}

_CASTS = {
    "n": int, "b": float, "omega": float, "g": float, "alpha": float,
    "coupling": str, "p": float, "tmax": float, "samples": int,
    "dt": float, "out": str, "workers": int,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    # defaults stay None so config-file values are distinguishable
    parser.add_argument("--n", type=int)
    parser.add_argument("--b", type=float)
    parser.add_argument("--omega", type=float)
    parser.add_argument("--g", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--coupling", choices=("nn", "lr", "none"))
    parser.add_argument("--p", type=float)
    parser.add_argument("--tmax", type=float)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--dt", type=float)
    parser.add_argument("--out")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--config", help="key=value file mirroring the flags")


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, val = (part.strip() for part in line.split("=", 1))
                if key not in _CASTS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                try:
                    values[key] = _CASTS[key](val)
                except ValueError as exc:
                    raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


def _merge(args: argparse.Namespace) -> dict:
    file_values = _read_config_file(args.config) if args.config else {}
    merged = {}
    for key, default in _DEFAULTS.items():
        flag = getattr(args, key, None)
        merged[key] = flag if flag is not None else file_values.get(key, default)
    return merged


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbatt",
        description="Spin-chain quantum battery simulator",
    )
    parser.add_argument("--version", action="version", version=f"spinbatt {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        if mode == "figure":
            continue
        _add_common(sub.add_parser(mode))
    fig = sub.add_parser("figure", help="regenerate a preset study as a data table")
    fig.add_argument("figure_id", type=int, choices=FIGURE_IDS)
    fig.add_argument("--samples", type=int)
    fig.add_argument("--out")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.mode == "figure":
            config = RunConfig(
                mode="figure", figure_id=args.figure_id,
                samples=args.samples or _DEFAULTS["samples"], out=args.out,
            )
        else:
            merged = _merge(args)
            config = RunConfig(
                mode=args.mode, n=merged["n"], b=merged["b"],
                omega=merged["omega"], g=merged["g"], alpha=merged["alpha"],
                coupling=merged["coupling"], p=merged["p"],
                t_max=merged["tmax"], samples=merged["samples"],
                dt=merged["dt"], out=merged["out"], workers=merged["workers"],
            )
        table = run(config)
    except UsageError as exc:
        print(f"spinbatt: usage error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"spinbatt: capacity error: {exc}", file=sys.stderr)
        return 3
    except RegimeError as exc:
        print(f"spinbatt: numerical-regime error: {exc}", file=sys.stderr)
        return 4
    if not config.out:
        sys.stdout.write(table.to_csv())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

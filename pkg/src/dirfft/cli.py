"""Command-line benchmark harness.

Runs a grid of configurations (comma-separated values are allowed for
--shape, --q, --mc and --op) and writes one CSV row per run:

    mc,omega,n,Ts,Ta,e

A flat key=value config file can seed any option; command-line flags
override it. Exit status is 0 only if every requested row was produced.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .bench import RunConfig, run_sweep, write_csv

_LIST_KEYS = ("shape", "q", "mc", "op")


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirfft",
        description="Benchmark the fast directional boundary-sum evaluator.",
    )
    parser.add_argument("--config", help="flat key=value config file; flags override it")
    parser.add_argument("--shape", default=None, help="ellipse or bean (comma list allowed)")
    parser.add_argument("--a", type=float, default=None, help="ellipse horizontal semi-axis")
    parser.add_argument("--b", type=float, default=None, help="ellipse vertical semi-axis")
    parser.add_argument("--q", default=None, help="dyadic frequency level (comma list allowed)")
    parser.add_argument("--p", type=int, default=None, help="points per wavelength")
    parser.add_argument("--ml", type=int, default=None, help="leaf length in wavelengths")
    parser.add_argument("--mf", type=int, default=None, help="frequency-grid oversampling")
    parser.add_argument("--mc", default=None, help="Chebyshev order (comma list allowed)")
    parser.add_argument("--op", default=None, help="operator: S, D, Dp or N (comma list allowed)")
    parser.add_argument(
        "--density", default=None, choices=["random", "planewave", "impulse"], help="test density"
    )
    parser.add_argument("--seed", type=int, default=None, help="RNG seed")
    parser.add_argument("--reps", type=int, default=None, help="repetitions per config")
    parser.add_argument("--out", default=None, help="CSV output file (default stdout)")
    parser.add_argument(
        "--verify",
        default=None,
        choices=["sample", "full", "off"],
        help="error check: 100-point sample, all points, or none",
    )
    parser.add_argument("--dump-plan", default=None, help="save the factored plan to this file")
    parser.add_argument("--load-plan", default=None, help="load a previously saved plan")
    parser.add_argument("-v", "--verbose", action="store_true", help="log run details to stderr")
    return parser


def _merged_options(args: argparse.Namespace) -> dict[str, str]:
    options: dict[str, str] = {}
    if args.config:
        options.update(_read_config_file(args.config))
    flag_map = {
        "shape": args.shape,
        "a": args.a,
        "b": args.b,
        "q": args.q,
        "p": args.p,
        "ml": args.ml,
        "mf": args.mf,
        "mc": args.mc,
        "op": args.op,
        "density": args.density,
        "seed": args.seed,
        "reps": args.reps,
        "out": args.out,
        "verify": args.verify,
        "dump_plan": args.dump_plan,
        "load_plan": args.load_plan,
    }
    for key, value in flag_map.items():
        if value is not None:
            options[key] = str(value)
    if args.verbose:
        options["verbose"] = "1"
    return options


def _configs_from_options(options: dict[str, str]) -> list[RunConfig]:
    known = {f.name for f in fields(RunConfig)}
    aliases = {"ml": "m_leaf", "mf": "m_freq", "mc": "m_cheb"}
    base: dict[str, object] = {}
    grid: dict[str, list[str]] = {}
    for key, value in options.items():
        name = aliases.get(key, key)
        if name not in known and key not in _LIST_KEYS:
            raise SystemExit(f"unknown option {key!r}")
        if key in _LIST_KEYS:
            grid[key] = [v.strip() for v in value.split(",") if v.strip()]
        else:
            base[name] = value
    # defaults for list keys
    grid.setdefault("shape", [RunConfig.shape])
    grid.setdefault("q", [str(RunConfig.q)])
    grid.setdefault("mc", [str(RunConfig.m_cheb)])
    grid.setdefault("op", [RunConfig.op])

    def coerce(name, value):
        kind = RunConfig.__dataclass_fields__[name].type
        if name in ("out", "dump_plan", "load_plan"):
            return value
        if kind.startswith("int"):
            return int(value)
        if kind.startswith("float"):
            return float(value)
        if kind.startswith("bool"):
            return value not in ("0", "false", "False", "")
        return value

    base = {name: coerce(name, value) for name, value in base.items()}
    configs = []
    for shape in grid["shape"]:
        for q in grid["q"]:
            for op in grid["op"]:
                for mc in grid["mc"]:
                    configs.append(
                        RunConfig(
                            **{
                                **base,
                                "shape": shape,
                                "q": int(q),
                                "op": op,
                                "m_cheb": int(mc),
                            }
                        )
                    )
    return configs


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    options = _merged_options(args)
    out_path = options.pop("out", None)
    try:
        configs = _configs_from_options(options)
        for config in configs:
            config.validate()
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    rows, failures = run_sweep(configs)
    if out_path:
        with open(out_path, "w") as handle:
            write_csv(rows, handle)
    else:
        write_csv(rows, sys.stdout)
    return 0 if not failures else 1


if __name__ == "__main__":
    raise SystemExit(main())

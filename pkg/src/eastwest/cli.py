"""Command line entry point.

    eastwest list-presets
    eastwest validate --config run.yaml
    eastwest run --preset fig1c --out results/fig1c
    eastwest run --config run.yaml --seed 3 --threads 1

Exit codes: 0 success, 2 invalid config, 3 numerical failure, 4 resource guard.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import yaml
from threadpoolctl import threadpool_limits

from .dynamics import KrylovConvergenceError
from .experiments import ConfigError, run_experiment, validate_config
from .presets import get_preset, list_presets
from .spectral import ResourceGuardError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_RESOURCE = 0, 2, 3, 4

log = logging.getLogger("eastwest")


def load_config(path) -> dict:
    """Read a YAML (or JSON) config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        cfg = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return cfg


def _resolve(args) -> dict:
    if bool(args.config) == bool(args.preset):
        raise ConfigError("give exactly one of --config or --preset")
    if args.preset:
        try:
            return get_preset(args.preset)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    return load_config(args.config)


def cmd_list(args) -> int:
    for name, desc in list_presets():
        print(f"{name:18s} {desc}")
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _resolve(args)
    validate_config(cfg)
    print(f"ok: {args.config or args.preset}")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _resolve(args)
    validate_config(cfg)
    out = args.out or cfg.get("output", {}).get("dir") or f"results/{cfg.get('name', 'run')}"
    seed = args.seed if args.seed is not None else cfg.get("seed")
    with threadpool_limits(limits=args.threads):
        files = run_experiment(cfg, out, seed=seed)
    for f in files:
        print(f)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eastwest", description="East-West chain experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-presets", help="show shipped experiment presets")
    p.set_defaults(func=cmd_list)

    for name, func, helptext in (
        ("validate", cmd_validate, "check a config without running it"),
        ("run", cmd_run, "run an experiment and write CSV + JSON outputs"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="YAML/JSON config file")
        p.add_argument("--preset", help="name of a shipped preset")
        if name == "run":
            p.add_argument("--out", help="output directory")
            p.add_argument("--seed", type=int, help="seed for sampled states")
            p.add_argument("--threads", type=int, default=None, help="BLAS/OpenMP thread limit")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceGuardError, MemoryError) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (KrylovConvergenceError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # semantic errors raised by constructors (e.g. a packet wider than the ring)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Command line: tdhfbench {simulate,audit,fdll-check,bounds} --config FILE."""

from __future__ import annotations

import argparse
import sys

from tdhfbench.model import ModelError
from tdhfbench.runner.config import SCENARIOS, ConfigError, load_config, parse_config
from tdhfbench.runner.output import emit_outputs
from tdhfbench.runner.scenarios import run_scenario


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tdhfbench", description=__doc__)
    ap.add_argument("scenario", choices=SCENARIOS)
    ap.add_argument("--config", help="TOML run configuration")
    ap.add_argument("--out", help="output directory (overrides [output] dir)")
    ap.add_argument("--seed", type=int, help="random seed (overrides the config)")
    ap.add_argument("--workers", type=int, default=1, help="worker processes for instance grids")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
            if cfg.scenario != args.scenario:
                raise ConfigError(f"config is for scenario {cfg.scenario!r}, not {args.scenario!r}")
        elif args.scenario == "simulate":
            raise ConfigError("simulate needs --config")
        else:
            cfg = parse_config({"scenario": args.scenario})
        cfg = cfg.with_overrides(seed=args.seed, out=args.out)
        if args.workers < 1:
            raise ConfigError("--workers must be at least 1")
        result = run_scenario(cfg, workers=args.workers)
    except (ConfigError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        emit_outputs(result, cfg, cfg.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for line in result.lines:
        print(line)
    for name, c in result.checks.items():
        print(f"{'PASS' if c.passed else 'FAIL'}  {name}: {c.value:.3e} (tol {c.tol:.1e})")
    if result.failures:
        print("failing checks: " + "; ".join(result.failures), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

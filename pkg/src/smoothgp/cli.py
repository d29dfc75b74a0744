"""Command-line harness: run campaigns, export surfaces, dump the catalog.

Setting precedence is CLI flag > config file (key=value lines, '#' starts
a comment) > built-in default. Exit status is 0 on success and 1 on
configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import benchmarks, harness, stackgp
from .harness import Campaign
from .surrogate import default_const_range, evolve

_RUN_DEFAULTS = {
    "function": "all",
    "dim": "2",
    "runs": 30,
    "seed": 0,
    "generations": None,
    "pop": None,
    "pso_iters": None,
    "rmse_samples": None,
    "out": "results",
    "workers": 1,
}
_SURFACE_DEFAULTS = {
    "function": "rastrigin",
    "seed": 0,
    "resolution": 64,
    "generations": None,
    "pop": None,
    "pso_iters": None,
    "rmse_samples": None,
    "out": "surface.csv",
    "program": None,
}
_INT_KEYS = {"runs", "seed", "generations", "pop", "pso_iters",
             "rmse_samples", "workers", "resolution"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothgp",
        description="Evolve smooth surrogate models of rugged benchmark functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a seeded multi-run campaign")
    run.add_argument("--function", help="benchmark name or 'all'")
    run.add_argument("--dim", help="2, 3, 4 or 'all'")
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--generations", type=int)
    run.add_argument("--pop", type=int)
    run.add_argument("--pso-iters", type=int, dest="pso_iters")
    run.add_argument("--rmse-samples", type=int, dest="rmse_samples")
    run.add_argument("--out", help="output directory for CSVs")
    run.add_argument("--workers", type=int)
    run.add_argument("--config", help="key=value settings file")

    surface = sub.add_parser(
        "surface", help="export a 2-D grid of target vs surrogate values")
    surface.add_argument("--function")
    surface.add_argument("--seed", type=int)
    surface.add_argument("--resolution", type=int)
    surface.add_argument("--generations", type=int)
    surface.add_argument("--pop", type=int)
    surface.add_argument("--pso-iters", type=int, dest="pso_iters")
    surface.add_argument("--rmse-samples", type=int, dest="rmse_samples")
    surface.add_argument("--out", help="output CSV file")
    surface.add_argument(
        "--program",
        help="postfix program text to export instead of evolving one")
    surface.add_argument("--config", help="key=value settings file")

    catalog = sub.add_parser("catalog", help="dump the benchmark catalog CSV")
    catalog.add_argument("--out", help="output CSV file (stdout if omitted)")
    return parser


def _load_config_file(path: str) -> dict:
    settings = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        settings[key.replace("-", "_")] = value
    return settings


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    from_file = _load_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = set(from_file) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    resolved = {}
    for key, fallback in defaults.items():
        value = getattr(args, key, None)
        if value is None and key in from_file:
            value = from_file[key]
            if key in _INT_KEYS:
                value = int(value)
        if value is None:
            value = fallback
        resolved[key] = value
    return resolved


def _overrides(settings: dict) -> dict:
    mapping = {"generations": "generations", "pop": "population_size",
               "pso_iters": "pso_iterations", "rmse_samples": "rmse_samples"}
    return {cfg: settings[key] for key, cfg in mapping.items()
            if settings[key] is not None}


def _cmd_run(args: argparse.Namespace) -> int:
    settings = _resolve(args, _RUN_DEFAULTS)
    function = settings["function"].strip().lower()
    names = benchmarks.names() if function == "all" else [function]
    dim_text = str(settings["dim"]).strip().lower()
    dims = benchmarks.CATALOG_DIMENSIONS if dim_text == "all" else (int(dim_text),)
    campaign = Campaign(
        functions=tuple(names),
        dimensions=dims,
        runs=settings["runs"],
        base_seed=settings["seed"],
        overrides=_overrides(settings),
        output_dir=settings["out"],
        workers=settings["workers"],
    )
    result = harness.run_campaign(campaign)
    for (name, dim), pair in result.pairs.items():
        print(f"{name} D={dim}: median f(argmin) = {pair.median_fitness:.6g} "
              f"over {len(pair.rows)} runs")
    print(f"results written to {settings['out']}")
    return 0


def _cmd_surface(args: argparse.Namespace) -> int:
    settings = _resolve(args, _SURFACE_DEFAULTS)
    fn = benchmarks.get(settings["function"], 2)
    if settings["program"]:
        program = stackgp.parse(settings["program"], 2, default_const_range(fn))
    else:
        config = harness.config_for(
            dimension=2, seed=settings["seed"], overrides=_overrides(settings))
        program = evolve(fn, config).best.program
        print(f"evolved surrogate: {stackgp.render(program)}")
    path = harness.export_surface_grid(
        fn, program, settings["resolution"], settings["out"])
    print(f"surface grid written to {path}")
    return 0


def _cmd_catalog(args: argparse.Namespace) -> int:
    text = harness.dump_catalog(args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        print(f"catalog written to {args.out}")
    return 0


_COMMANDS = {"run": _cmd_run, "surface": _cmd_surface, "catalog": _cmd_catalog}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()

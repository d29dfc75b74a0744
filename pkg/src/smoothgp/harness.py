"""Campaign driver: seeded multi-run experiments, CSV outputs, grid export.

A campaign executes `runs` independent evolutions per (function, dimension)
pair with seeds ``base_seed + run_index`` and writes, per pair, a CSV of
per-run results plus a text artifact with the winning programs, and one
``summary.csv`` row per pair. Runs may execute concurrently; outputs are
ordered by run index before writing, so bytes never depend on scheduling.
Rerunning a partially completed campaign skips run rows that already exist
on disk and preserves their bytes.

Median convention: for even run counts the lower-middle element is used.
All CSVs use '.' decimals, LF line endings and UTF-8.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, fields as dataclass_fields
from pathlib import Path

import numpy as np

from . import benchmarks, stackgp
from .benchmarks import BenchmarkFunction
from .stackgp import Program
from .surrogate import EvolutionConfig, default_const_range, evolve

RESULT_COLUMNS = ("function", "dimension", "run", "seed",
                  "fitness_f_at_argmin", "fitness_full_L", "rmse")
SUMMARY_HEADER = ("function,dimension,runs,median_f_at_argmin,mean_f_at_argmin,"
                  "median_full_L,mean_full_L")
CATALOG_HEADER = "name,dimension,lo,hi,known_minimum,known_argmin,verified"

# Population defaults by dimension, from the reference setup.
DEFAULT_POPULATION = {2: 50, 3: 50, 4: 100}

_CONFIG_FIELDS = {f.name for f in dataclass_fields(EvolutionConfig)} - {"seed"}


def result_header(dimension: int) -> str:
    return ",".join(RESULT_COLUMNS + tuple(f"argmin_{d}" for d in range(dimension)))


def median_lower(values) -> float:
    """Median; lower-middle element for even counts."""
    ordered = sorted(values)
    if not ordered:
        raise ValueError("median of empty sequence")
    return ordered[(len(ordered) - 1) // 2]


@dataclass(frozen=True)
class RunRow:
    """One campaign run as it appears in the per-pair CSV."""

    function: str
    dimension: int
    run: int
    seed: int
    f_at_argmin: float
    full_loss: float
    rmse: float
    argmin: tuple[float, ...]
    program: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class PairResult:
    rows: tuple[RunRow, ...]
    median_fitness: float
    mean_fitness: float
    median_full_loss: float
    mean_full_loss: float


@dataclass(frozen=True)
class CampaignResult:
    pairs: dict


@dataclass(frozen=True)
class Campaign:
    """A reproducible batch of evolutions over (function, dimension) pairs."""

    functions: tuple[str, ...]
    dimensions: tuple[int, ...] = (2,)
    runs: int = 30
    base_seed: int = 0
    overrides: dict = field(default_factory=dict)
    output_dir: str | Path = "results"
    workers: int = 1

    def __post_init__(self):
        known = set(benchmarks.names())
        normalized = tuple(name.strip().lower() for name in self.functions)
        object.__setattr__(self, "functions", normalized)
        object.__setattr__(self, "dimensions", tuple(int(d) for d in self.dimensions))
        if not normalized:
            raise ValueError("campaign needs at least one function")
        for name in normalized:
            if name not in known:
                raise ValueError(f"unknown benchmark function {name!r}")
        for dim in self.dimensions:
            if dim not in benchmarks.CATALOG_DIMENSIONS:
                raise ValueError(f"dimension {dim} outside supported {2, 3, 4}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        unknown = set(self.overrides) - _CONFIG_FIELDS
        if unknown:
            raise ValueError(f"unknown config overrides: {sorted(unknown)}")

    def pairs(self) -> list[tuple[str, int]]:
        return [(name, dim) for name in self.functions for dim in self.dimensions]


def config_for(dimension: int, seed: int, overrides: dict) -> EvolutionConfig:
    """EvolutionConfig with the per-dimension population default applied."""
    settings = {"population_size": DEFAULT_POPULATION[dimension]}
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return EvolutionConfig(seed=seed, **settings)


def _run_task(task) -> RunRow:
    name, dimension, run_index, seed, overrides = task
    fn = benchmarks.get(name, dimension)
    record = evolve(fn, config_for(dimension, seed, overrides))
    best = record.best
    return RunRow(
        function=name,
        dimension=dimension,
        run=run_index,
        seed=seed,
        f_at_argmin=best.f_at_argmin,
        full_loss=best.fitness,
        rmse=best.rmse,
        argmin=best.argmin,
        program=stackgp.render(best.program),
    )


def _execute(tasks, workers: int, done: dict) -> None:
    # fills `done` in place so completed runs survive a failing sibling
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            done[task[:3]] = _run_task(task)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(_run_task, task): task for task in tasks}
        for future in as_completed(futures):
            task = futures[future]
            done[task[:3]] = future.result()


def _format(value: float) -> str:
    return repr(float(value))


def _row_line(row: RunRow) -> str:
    cells = [row.function, str(row.dimension), str(row.run), str(row.seed),
             _format(row.f_at_argmin), _format(row.full_loss), _format(row.rmse)]
    cells.extend(_format(v) for v in row.argmin)
    return ",".join(cells)


def _parse_row(line: str) -> RunRow:
    parts = line.split(",")
    return RunRow(
        function=parts[0],
        dimension=int(parts[1]),
        run=int(parts[2]),
        seed=int(parts[3]),
        f_at_argmin=float(parts[4]),
        full_loss=float(parts[5]),
        rmse=float(parts[6]),
        argmin=tuple(float(v) for v in parts[7:]),
    )


def pair_csv_path(output_dir, name: str, dimension: int) -> Path:
    return Path(output_dir) / f"{name}_d{dimension}.csv"


def pair_programs_path(output_dir, name: str, dimension: int) -> Path:
    return Path(output_dir) / f"{name}_d{dimension}_programs.txt"


def _read_keyed_lines(path: Path, key_field: int, skip_header: bool) -> dict[int, str]:
    if not path.exists():
        return {}
    keyed = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    if skip_header and lines:
        lines = lines[1:]
    for line in lines:
        parts = line.split(",") if skip_header else line.split("\t")
        try:
            keyed[int(parts[key_field])] = line
        except (IndexError, ValueError):
            continue
    return keyed


def _write_lines(path: Path, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in lines:
            handle.write(line + "\n")


def _write_pair_outputs(campaign: Campaign, existing_rows, existing_programs,
                        computed) -> None:
    out = Path(campaign.output_dir)
    for name, dim in campaign.pairs():
        kept = existing_rows[(name, dim)]
        fresh = {run: computed[(name, dim, run)]
                 for run in range(campaign.runs)
                 if (name, dim, run) in computed}
        if not fresh and not kept:
            continue
        lines = [result_header(dim)]
        program_lines = ["run\tseed\tprogram"]
        for run in range(campaign.runs):
            if run in kept:
                lines.append(kept[run])
            elif run in fresh:
                lines.append(_row_line(fresh[run]))
            else:
                continue
            if run in fresh:
                program_lines.append(
                    f"{run}\t{fresh[run].seed}\t{fresh[run].program}")
            elif run in existing_programs[(name, dim)]:
                program_lines.append(existing_programs[(name, dim)][run])
        _write_lines(pair_csv_path(out, name, dim), lines)
        _write_lines(pair_programs_path(out, name, dim), program_lines)


def run_campaign(campaign: Campaign) -> CampaignResult:
    """Execute a campaign, write its CSV outputs, and aggregate statistics.

    Existing per-run rows in the output directory are reused untouched;
    only missing (function, dimension, run) triples are computed. Partial
    results are flushed to disk even when a run fails.
    """
    out = Path(campaign.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    existing_rows = {}
    existing_programs = {}
    tasks = []
    for name, dim in campaign.pairs():
        existing_rows[(name, dim)] = _read_keyed_lines(
            pair_csv_path(out, name, dim), key_field=2, skip_header=True)
        existing_programs[(name, dim)] = _read_keyed_lines(
            pair_programs_path(out, name, dim), key_field=0, skip_header=True)
        for run in range(campaign.runs):
            if run not in existing_rows[(name, dim)]:
                tasks.append((name, dim, run, campaign.base_seed + run,
                              dict(campaign.overrides)))
    computed = {}
    try:
        _execute(tasks, campaign.workers, computed)
    finally:
        _write_pair_outputs(campaign, existing_rows, existing_programs, computed)

    pairs = {}
    summary_lines = [SUMMARY_HEADER]
    for name, dim in campaign.pairs():
        rows = []
        for run in range(campaign.runs):
            if (name, dim, run) in computed:
                rows.append(computed[(name, dim, run)])
            else:
                rows.append(_parse_row(existing_rows[(name, dim)][run]))
        f_values = [r.f_at_argmin for r in rows]
        loss_values = [r.full_loss for r in rows]
        pair = PairResult(
            rows=tuple(rows),
            median_fitness=median_lower(f_values),
            mean_fitness=float(np.mean(f_values)),
            median_full_loss=median_lower(loss_values),
            mean_full_loss=float(np.mean(loss_values)),
        )
        pairs[(name, dim)] = pair
        summary_lines.append(",".join([
            name, str(dim), str(campaign.runs),
            _format(pair.median_fitness), _format(pair.mean_fitness),
            _format(pair.median_full_loss), _format(pair.mean_full_loss),
        ]))
    _write_lines(out / "summary.csv", summary_lines)
    return CampaignResult(pairs=pairs)


def export_surface_grid(fn: BenchmarkFunction, program: Program,
                        resolution: int, path) -> Path:
    """Write a resolution x resolution grid CSV of target vs surrogate.

    Two-dimensional functions only; each axis is a corner-inclusive
    linspace over the box, rows are emitted row-major in (x0, x1).
    """
    if fn.dimension != 2 or program.dimension != 2:
        raise ValueError("surface export requires dimension 2")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    axis0 = np.linspace(fn.lower, fn.upper, resolution)
    axis1 = np.linspace(fn.lower, fn.upper, resolution)
    grid = np.column_stack([np.repeat(axis0, resolution),
                            np.tile(axis1, resolution)])
    original = fn.evaluate_batch(grid)
    surrogate_values = stackgp.interpret_batch(program, grid)
    lines = ["x0,x1,f_original,f_surrogate"]
    for (x0, x1), f_orig, f_surr in zip(grid, original, surrogate_values):
        lines.append(",".join(
            [_format(x0), _format(x1), _format(f_orig), _format(f_surr)]))
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    _write_lines(path, lines)
    return path


def dump_catalog(path=None) -> str:
    """Machine-readable catalog: one CSV row per (function, dimension)."""
    lines = [CATALOG_HEADER]
    for fn in benchmarks.catalog():
        minimum = "" if fn.known_minimum is None else _format(fn.known_minimum)
        argmin = ("" if fn.known_argmin is None
                  else ";".join(_format(v) for v in fn.known_argmin))
        lines.append(",".join([
            fn.name, str(fn.dimension), _format(fn.lower), _format(fn.upper),
            minimum, argmin, "true" if fn.verified else "false",
        ]))
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    return text

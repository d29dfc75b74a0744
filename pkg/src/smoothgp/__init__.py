"""Smooth surrogate evolution for rugged optimization landscapes.

Stack-based linear genetic programming evolves cheap smooth stand-ins for
rugged benchmark functions; each candidate is scored by running a
self-tuning particle swarm optimizer on it and evaluating the original
function at the located argminimum, plus a shape-fidelity RMSE term.
"""

from .benchmarks import BenchmarkFunction, catalog, get, names
from .fstpso import FuzzyInputs, FuzzySettings, fuzzy_update, optimize, swarm_size
from .harness import (Campaign, CampaignResult, dump_catalog,
                      export_surface_grid, run_campaign)
from .stackgp import (Program, interpret, interpret_batch, mutate, parse,
                      random_program, render, two_point_crossover)
from .surrogate import (EvolutionConfig, RunRecord, ScoredIndividual, evolve,
                        fitness, tournament_select)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkFunction", "Campaign", "CampaignResult", "EvolutionConfig",
    "FuzzyInputs", "FuzzySettings", "Program", "RunRecord",
    "ScoredIndividual", "catalog", "dump_catalog", "evolve",
    "export_surface_grid", "fitness", "fuzzy_update", "get", "interpret",
    "interpret_batch", "mutate", "names", "optimize", "parse",
    "random_program", "render", "run_campaign", "swarm_size",
    "tournament_select", "two_point_crossover",
]

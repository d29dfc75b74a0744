"""Self-tuning particle swarm optimizer over box bounds.

Every iteration, each particle's inertia, cognitive and social factors and
its velocity limits are re-derived by a zero-order Sugeno fuzzy rule base
from two normalized signals:

* ``phi`` in [-1, 1]: performance change versus the previous iteration,
  ``(value - previous_value) / (|previous_value| + 1)`` clamped; negative
  means the particle improved, positive means it got worse,
* ``delta`` in [0, 1]: Euclidean distance from the swarm best divided by
  the diagonal of the bounds box.

Both linguistic variables use triangular membership partitions (phi:
Better/Same/Worse peaking at -1/0/+1; delta: Near/Mid/Far peaking at
0/0.5/1), so memberships always sum to one and the inferred settings are
convex combinations of the rule consequents below. Rough corners of the
table: a worsening particle far from the swarm best explores (high inertia,
high social pull, full velocity cap), an improving particle near the best
exploits (low inertia, high cognitive pull, tight velocity cap).

Velocity limits derive from the box edge lengths: ``vmax = vmax_scale *
(hi - lo)`` and ``vmin = vmin_scale * 0.01 * (hi - lo)`` per dimension.
Positions are clamped to the box with the velocity zeroed on clamped
dimensions (absorbing walls). A single ``optimize`` call is strictly
sequential; independent calls with independent generators may run in
parallel. The swarm size is ``floor(10 + 2 * sqrt(dimension))`` so no
user-supplied setting is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

# Rule consequents, indexed [phi set, delta set] with rows Better/Same/Worse
# and columns Near/Mid/Far.
_INERTIA = (
    (0.40, 0.50, 0.60),
    (0.50, 0.65, 0.80),
    (0.60, 0.75, 0.90),
)
_COGNITIVE = (
    (2.20, 1.90, 1.60),
    (1.90, 1.60, 1.30),
    (1.60, 1.30, 1.00),
)
_SOCIAL = (
    (1.00, 1.30, 1.60),
    (1.30, 1.60, 1.90),
    (1.60, 2.00, 2.50),
)
_VMAX_SCALE = (
    (0.20, 0.40, 0.60),
    (0.35, 0.55, 0.75),
    (0.50, 0.70, 1.00),
)
_VMIN_SCALE = (
    (0.00, 0.05, 0.10),
    (0.00, 0.10, 0.20),
    (0.10, 0.20, 0.30),
)

# Stacked (5, 3, 3) view of the tables for the vectorized path.
_TABLES = np.array([_INERTIA, _COGNITIVE, _SOCIAL, _VMAX_SCALE, _VMIN_SCALE])

VMIN_BASE_FRACTION = 0.01


def swarm_size(dimension: int) -> int:
    """Population heuristic floor(10 + 2*sqrt(D)); no user tuning."""
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    return int(10 + 2 * math.sqrt(dimension))


@dataclass(frozen=True)
class FuzzyInputs:
    """Normalized per-particle signals feeding the rule base."""

    phi: float
    delta: float

    def __post_init__(self):
        if not -1.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must lie in [-1, 1], got {self.phi}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")


class FuzzySettings(NamedTuple):
    inertia: float
    cognitive: float
    social: float
    vmax_scale: float
    vmin_scale: float


def fuzzy_update(inputs: FuzzyInputs) -> FuzzySettings:
    """Zero-order Sugeno inference: firing-strength-weighted consequents."""
    phi, delta = inputs.phi, inputs.delta
    mu_phi = (max(0.0, -phi), 1.0 - abs(phi), max(0.0, phi))
    mu_delta = (max(0.0, 1.0 - 2.0 * delta),
                1.0 - 2.0 * abs(delta - 0.5),
                max(0.0, 2.0 * delta - 1.0))
    num = [0.0] * 5
    den = 0.0
    for i in range(3):
        if mu_phi[i] == 0.0:
            continue
        for j in range(3):
            w = mu_phi[i] * mu_delta[j]
            if w == 0.0:
                continue
            den += w
            num[0] += w * _INERTIA[i][j]
            num[1] += w * _COGNITIVE[i][j]
            num[2] += w * _SOCIAL[i][j]
            num[3] += w * _VMAX_SCALE[i][j]
            num[4] += w * _VMIN_SCALE[i][j]
    return FuzzySettings(*(v / den for v in num))


def _settings_batch(phi: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Vectorized fuzzy_update over particle vectors; returns (P, 5)."""
    mu_phi = np.stack(
        [np.maximum(0.0, -phi), 1.0 - np.abs(phi), np.maximum(0.0, phi)], axis=1)
    mu_delta = np.stack(
        [np.maximum(0.0, 1.0 - 2.0 * delta),
         1.0 - 2.0 * np.abs(delta - 0.5),
         np.maximum(0.0, 2.0 * delta - 1.0)], axis=1)
    weights = mu_phi[:, :, None] * mu_delta[:, None, :]
    total = weights.sum(axis=(1, 2))
    return np.einsum("pij,kij->pk", weights, _TABLES) / total[:, None]


@dataclass(frozen=True)
class Particle:
    """Read-only view of one particle's state and last-applied settings."""

    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_value: float
    inertia: float
    cognitive: float
    social: float
    vmax: np.ndarray
    vmin: np.ndarray


@dataclass
class SwarmState:
    """Struct-of-arrays swarm; mutated in place by step()."""

    positions: np.ndarray
    velocities: np.ndarray
    values: np.ndarray
    prev_values: np.ndarray
    best_positions: np.ndarray
    best_values: np.ndarray
    global_best_position: np.ndarray
    global_best_value: float
    inertia: np.ndarray
    cognitive: np.ndarray
    social: np.ndarray
    vmax: np.ndarray
    vmin: np.ndarray
    iteration: int = 0
    evaluations_used: int = 0

    @property
    def particles(self) -> list[Particle]:
        return [
            Particle(
                position=self.positions[i].copy(),
                velocity=self.velocities[i].copy(),
                best_position=self.best_positions[i].copy(),
                best_value=float(self.best_values[i]),
                inertia=float(self.inertia[i]),
                cognitive=float(self.cognitive[i]),
                social=float(self.social[i]),
                vmax=self.vmax[i].copy(),
                vmin=self.vmin[i].copy(),
            )
            for i in range(self.positions.shape[0])
        ]


def _split_bounds(bounds) -> tuple[np.ndarray, np.ndarray]:
    box = np.asarray(bounds, dtype=float)
    if box.ndim != 2 or box.shape[1] != 2 or box.shape[0] < 1:
        raise ValueError("bounds must be a (D, 2) array of (lo, hi) pairs")
    lo, hi = box[:, 0], box[:, 1]
    if np.any(lo > hi):
        raise ValueError("bounds must satisfy lo <= hi per dimension")
    return lo, hi


def _as_batch(objective: Callable, vectorized: bool) -> Callable:
    if vectorized:
        return objective

    def batched(points: np.ndarray) -> np.ndarray:
        return np.array([float(objective(p)) for p in points])

    return batched


def init_swarm(objective, bounds, rng, vectorized: bool = False) -> SwarmState:
    """Place the swarm uniformly in the box and evaluate it once."""
    rng = np.random.default_rng(rng)
    lo, hi = _split_bounds(bounds)
    dim = lo.shape[0]
    size = swarm_size(dim)
    obj = _as_batch(objective, vectorized)
    positions = lo + rng.random((size, dim)) * (hi - lo)
    values = np.asarray(obj(positions), dtype=float)
    gi = int(np.argmin(values))
    neutral = fuzzy_update(FuzzyInputs(0.0, 0.5))
    span = hi - lo
    return SwarmState(
        positions=positions,
        velocities=np.zeros((size, dim)),
        values=values,
        prev_values=values.copy(),
        best_positions=positions.copy(),
        best_values=values.copy(),
        global_best_position=positions[gi].copy(),
        global_best_value=float(values[gi]),
        inertia=np.full(size, neutral.inertia),
        cognitive=np.full(size, neutral.cognitive),
        social=np.full(size, neutral.social),
        vmax=np.tile(neutral.vmax_scale * span, (size, 1)),
        vmin=np.tile(neutral.vmin_scale * VMIN_BASE_FRACTION * span, (size, 1)),
        evaluations_used=size,
    )


def step(state: SwarmState, objective, bounds, rng,
         vectorized: bool = False) -> SwarmState:
    """Advance the swarm one iteration (one objective pass); returns state.

    All particles move against the global best from the iteration start;
    personal and global bests are updated afterwards and never worsen.
    """
    rng = np.random.default_rng(rng)
    lo, hi = _split_bounds(bounds)
    obj = _as_batch(objective, vectorized)
    size, dim = state.positions.shape
    span = hi - lo
    diagonal = float(np.linalg.norm(span))

    phi = (state.values - state.prev_values) / (np.abs(state.prev_values) + 1.0)
    phi = np.clip(phi, -1.0, 1.0)
    phi = np.where(np.isnan(phi), 0.0, phi)
    if diagonal > 0.0:
        dist = np.linalg.norm(state.positions - state.global_best_position, axis=1)
        delta = np.minimum(dist / diagonal, 1.0)
    else:
        delta = np.zeros(size)

    settings = _settings_batch(phi, delta)
    inertia, cognitive, social = settings[:, 0], settings[:, 1], settings[:, 2]
    vmax = settings[:, 3, None] * span
    vmin = settings[:, 4, None] * VMIN_BASE_FRACTION * span

    r_cog = rng.random((size, dim))
    r_soc = rng.random((size, dim))
    velocity = (inertia[:, None] * state.velocities
                + cognitive[:, None] * r_cog * (state.best_positions - state.positions)
                + social[:, None] * r_soc * (state.global_best_position - state.positions))
    # Magnitude clamp preserves sign; exact zeros stay zero.
    velocity = np.sign(velocity) * np.clip(np.abs(velocity), vmin, vmax)

    moved = state.positions + velocity
    clamped = np.clip(moved, lo, hi)
    velocity = np.where(moved != clamped, 0.0, velocity)

    values = np.asarray(obj(clamped), dtype=float)

    state.prev_values = state.values
    state.positions = clamped
    state.velocities = velocity
    state.values = values
    improved = values < state.best_values
    state.best_positions = np.where(improved[:, None], clamped, state.best_positions)
    state.best_values = np.where(improved, values, state.best_values)
    gi = int(np.argmin(state.best_values))
    if state.best_values[gi] < state.global_best_value:
        state.global_best_value = float(state.best_values[gi])
        state.global_best_position = state.best_positions[gi].copy()
    state.inertia, state.cognitive, state.social = inertia, cognitive, social
    state.vmax, state.vmin = vmax, vmin
    state.iteration += 1
    state.evaluations_used += size
    return state


def optimize(objective, bounds, budget: int, rng,
             vectorized: bool = False) -> tuple[np.ndarray, float]:
    """Minimize ``objective`` over the box within an evaluation budget.

    Args:
        objective: callable mapping a point to a value, or, with
            ``vectorized=True``, an (n, D) array to an (n,) array.
        bounds: (D, 2) array of per-dimension (lo, hi).
        budget: maximum number of objective evaluations; must cover at
            least one full swarm pass.
        rng: seed or numpy Generator; identical seeds give identical runs.

    Returns:
        (argmin, min_value): the best position found (inside the box) and
        its objective value.
    """
    rng = np.random.default_rng(rng)
    lo, _ = _split_bounds(bounds)
    size = swarm_size(lo.shape[0])
    if budget < size:
        raise ValueError(f"budget {budget} below swarm size {size}")
    obj = _as_batch(objective, vectorized)
    state = init_swarm(obj, bounds, rng, vectorized=True)
    while state.evaluations_used + size <= budget:
        step(state, obj, bounds, rng, vectorized=True)
    assert state.evaluations_used <= budget
    return state.global_best_position.copy(), float(state.global_best_value)

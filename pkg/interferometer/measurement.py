"""Born-rule weights, seeded collapse and the per-run generator scheme.

Generators are numpy ``PCG64`` bit generators seeded through
``SeedSequence``. A single protocol run seeded with ``seed`` uses
``SeedSequence(seed)``; Monte Carlo trial ``i`` uses
``SeedSequence(seed, spawn_key=(i,))``. Trial streams depend only on
``(seed, i)``, so serial and parallel ensembles sample identical outcomes.
"""
import enum

import numpy as np

from .algebra import norm_sq
from .exceptions import ZeroOutput


class Outcome(str, enum.Enum):
    LEFT = 'left'
    RIGHT = 'right'


def run_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def trial_generator(seed: int, trial_index: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.PCG64(sequence))


def born_probabilities(result):
    """``(p_right, p_left)`` of a pass, from the squared norms of ψ3 and ψ4."""
    right = norm_sq(result.psi3)
    left = norm_sq(result.psi4)
    total = right + left
    if total == 0.0:
        raise ZeroOutput('both output channels are empty; collapse is undefined')
    p_right = right / total
    return p_right, 1.0 - p_right


def collapse_with(p_left: float, rng: np.random.Generator) -> Outcome:
    return Outcome.LEFT if rng.random() < p_left else Outcome.RIGHT


def collapse(result, rng: np.random.Generator) -> Outcome:
    """Select one output channel with Born-rule probability."""
    _, p_left = born_probabilities(result)
    return collapse_with(p_left, rng)

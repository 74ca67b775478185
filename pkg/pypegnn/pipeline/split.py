# -*- coding: utf-8 -*-
"""Train/test/evaluation splits and shuffled minibatches."""

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from ..util.exceptions import ContractError

@dataclass(frozen=True)
class SplitSpec:
    """Split fractions and seed; defaults to 70/15/15."""
    train_frac: float = 0.70
    test_frac: float = 0.15
    eval_frac: float = 0.15
    seed: int = 0

    def __post_init__(self) -> None:
        fractions = (self.train_frac, self.test_frac, self.eval_frac)
        if min(fractions) <= 0:
            raise ContractError(f'Split fractions must be positive, got {fractions}')
        if abs(sum(fractions) - 1.0) > 1e-9:
            raise ContractError(f'Split fractions must sum to 1, got {sum(fractions)}')

class SplitIndices(NamedTuple):
    train: np.ndarray
    test: np.ndarray
    eval: np.ndarray

# A part needs two points to carry a neighbour graph.
MIN_PART_SIZE = 2

def _round_half_up(value: float) -> int:
    return int(np.floor(value + 0.5))

def split(n_points: int, spec: SplitSpec = SplitSpec()) -> SplitIndices:
    """Seeded disjoint split of range(n_points).

    Test and evaluation sizes are rounded to nearest; the remainder goes to
    training. Index arrays are returned sorted.

    Raises
    ------
    ContractError
        When any part would hold fewer than MIN_PART_SIZE points.
    """
    n_test = _round_half_up(n_points * spec.test_frac)
    n_eval = _round_half_up(n_points * spec.eval_frac)
    n_train = n_points - n_test - n_eval
    if min(n_train, n_test, n_eval) < MIN_PART_SIZE:
        raise ContractError(f'Split of {n_points} points leaves a part below '
                            f'{MIN_PART_SIZE} points '
                            f'(train={n_train}, test={n_test}, eval={n_eval})')
    order = np.random.default_rng(spec.seed).permutation(n_points)
    return SplitIndices(np.sort(order[:n_train]),
                        np.sort(order[n_train:n_train + n_test]),
                        np.sort(order[n_train + n_test:]))

def _partitions(n_points: int, batch_size: int) -> int:
    # Every batch keeps at least 2 points so a graph can be built on it.
    if batch_size < 2:
        raise ContractError(f'batch_size must be at least 2, got {batch_size}')
    return max(1, min(int(np.ceil(n_points / batch_size)), n_points // 2))

def iterate_batches(index: Sequence[int], batch_size: int,
                    rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Shuffle the indices and yield near equal batches of about batch_size."""
    index = np.asarray(index, dtype=np.int64)
    partitions = _partitions(index.shape[0], batch_size)
    shuffled = index[rng.permutation(index.shape[0])]
    yield from np.array_split(shuffled, partitions)

def ordered_batches(n_points: int, batch_size: int):
    """Deterministic index ordered batches used at inference."""
    partitions = _partitions(n_points, batch_size)
    return np.array_split(np.arange(n_points), partitions)

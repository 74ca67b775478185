# -*- coding: utf-8 -*-
"""Seeded parameter initialization."""

import numpy as np

from ..util.exceptions import DimensionError
from .tensor import Tensor

def uniform_parameter(rng: np.random.Generator, fan_in: int, fan_out: int,
                      name: str) -> Tensor:
    """fan_in x fan_out weight drawn from uniform(-s, s), s = 1 / sqrt(fan_in).

    Raises
    ------
    DimensionError
        When fan_in or fan_out is below 1.
    """
    if fan_in < 1 or fan_out < 1:
        raise DimensionError(f'{name} needs positive dimensions, got {fan_in} x {fan_out}')
    bound = 1.0 / np.sqrt(fan_in)
    return Tensor(rng.uniform(-bound, bound, size=(fan_in, fan_out)),
                  requires_grad=True, name=name)

def zero_parameter(rows: int, cols: int, name: str) -> Tensor:
    return Tensor(np.zeros((rows, cols)), requires_grad=True, name=name)

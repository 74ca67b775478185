# -*- coding: utf-8 -*-
"""Central finite difference helpers shared by the gradient tests."""

from typing import Callable, List, Sequence

import numpy as np

from .context import diffcore

def analytic_gradients(loss_fn: Callable, tensors: Sequence) -> List[np.ndarray]:
    """Gradients of loss_fn() with respect to tensors, through a tape."""
    for tensor in tensors:
        tensor.zero_grad()
    with diffcore.Tape() as tape:
        loss = loss_fn()
    diffcore.backward(loss, tape)
    return [tensor.grad if tensor.grad is not None else np.zeros_like(tensor.values)
            for tensor in tensors]

def numeric_gradient(loss_fn: Callable, tensor, step: float = 1e-5) -> np.ndarray:
    """Central differences of the scalar loss_fn() over every entry of tensor."""
    original = tensor.values.copy()
    grad = np.zeros_like(original)
    for index in np.ndindex(original.shape):
        shifted = original.copy()
        shifted[index] += step
        tensor.assign(shifted)
        upper = float(loss_fn().values[0, 0])
        shifted[index] -= 2 * step
        tensor.assign(shifted)
        lower = float(loss_fn().values[0, 0])
        grad[index] = (upper - lower) / (2 * step)
    tensor.assign(original)
    return grad

def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(np.max(np.abs(analytic)), np.max(np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric)) / scale)

def max_relative_error(loss_fn: Callable, tensors: Sequence, step: float = 1e-5) -> float:
    """Worst relative error between tape and finite difference gradients."""
    analytic = analytic_gradients(loss_fn, tensors)
    return max(relative_error(grad, numeric_gradient(loss_fn, tensor, step))
               for grad, tensor in zip(analytic, tensors))

# -*- coding: utf-8 -*-
"""Differentiable dense operations.

Every function takes Tensor operands, returns a new Tensor and, when a tape
is active and an operand requires gradients, records its local gradient rule.

    Functions
    ---------
    matmul(a, b)
        Matrix product.
    elementwise(kind, a, b=None, slope=0.2)
        add, sub, mul (row/column broadcasting) and relu, exp, log, leaky_relu.
    gather_rows(a, index)
        Select rows by index, repeating allowed.
    slice_rows(a, start, stop)
        Contiguous row block.
    concat_cols(tensors)
        Horizontal concatenation.
    row_sum(a), sum_all(a), mean_all(a), scale(a, factor)
        Reductions and scaling by a constant.
"""

from typing import Optional, Sequence

import numpy as np

from ..util.exceptions import DimensionError, DomainError
from .tensor import Tensor, make_result

_BINARY = ('add', 'sub', 'mul')
_UNARY = ('relu', 'exp', 'log', 'leaky_relu')

def _unbroadcast(grad: np.ndarray, shape) -> np.ndarray:
    if shape[0] == 1 and grad.shape[0] != 1:
        grad = grad.sum(axis=0, keepdims=True)
    if shape[1] == 1 and grad.shape[1] != 1:
        grad = grad.sum(axis=1, keepdims=True)
    return grad

def _fits(big, small) -> bool:
    return small in (big, (1, big[1]), (big[0], 1), (1, 1))

def _check_broadcast(a: Tensor, b: Tensor) -> None:
    if not (_fits(a.shape, b.shape) or _fits(b.shape, a.shape)):
        raise DimensionError(f'Cannot broadcast shapes {a.shape} and {b.shape}')

def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product a @ b.

    Raises
    ------
    DimensionError
        When a.cols != b.rows.
    """
    if a.cols != b.rows:
        raise DimensionError(f'matmul shape mismatch: {a.shape} @ {b.shape}')
    a_values, b_values = a.values, b.values

    def rule(grad):
        return grad @ b_values.T, a_values.T @ grad

    return make_result(a_values @ b_values, (a, b), rule)

def elementwise(kind: str, a: Tensor, b: Optional[Tensor] = None,
                slope: float = 0.2) -> Tensor:
    """Elementwise arithmetic and activations.

    Parameters
    ----------
    kind : str
        One of add, sub, mul, relu, exp, log, leaky_relu.
    a : Tensor
        First operand.
    b : Tensor, optional
        Second operand for the binary kinds. Either operand may be a row
        vector, a column vector or 1 x 1 matching the other's shape.
    slope : float
        Negative slope of leaky_relu.

    Returns
    -------
    Tensor
        Result with the broadcast shape.

    Raises
    ------
    DimensionError
        When shapes are not compatible.
    DomainError
        When log meets a non-positive entry.
    ValueError
        When the kind is unknown or the operand count does not match it.
    """
    if kind in _BINARY:
        if b is None:
            raise ValueError(f'{kind} needs two operands')
        _check_broadcast(a, b)
        a_values, b_values = a.values, b.values
        a_shape, b_shape = a.shape, b.shape
        if kind == 'add':
            values = a_values + b_values
            def rule(grad):
                return _unbroadcast(grad, a_shape), _unbroadcast(grad, b_shape)
        elif kind == 'sub':
            values = a_values - b_values
            def rule(grad):
                return _unbroadcast(grad, a_shape), _unbroadcast(-grad, b_shape)
        else:
            values = a_values * b_values
            def rule(grad):
                return (_unbroadcast(grad * b_values, a_shape),
                        _unbroadcast(grad * a_values, b_shape))
        return make_result(values, (a, b), rule)
    if kind not in _UNARY:
        raise ValueError(f'Unknown elementwise kind: {kind}')
    if b is not None:
        raise ValueError(f'{kind} takes a single operand')
    x = a.values
    if kind == 'relu':
        mask = x > 0
        values = np.where(mask, x, 0.0)
        def unary_rule(grad):
            return (grad * mask,)
    elif kind == 'leaky_relu':
        mask = x > 0
        values = np.where(mask, x, slope * x)
        def unary_rule(grad):
            return (np.where(mask, grad, slope * grad),)
    elif kind == 'exp':
        values = np.exp(x)
        def unary_rule(grad):
            return (grad * values,)
    else:
        if np.any(x <= 0):
            row, col = np.argwhere(x <= 0)[0]
            raise DomainError(f'log of non-positive entry {x[row, col]} at ({row}, {col})')
        values = np.log(x)
        def unary_rule(grad):
            return (grad / x,)
    return make_result(values, (a,), unary_rule)

def relu(a: Tensor) -> Tensor:
    return elementwise('relu', a)

def leaky_relu(a: Tensor, slope: float = 0.2) -> Tensor:
    return elementwise('leaky_relu', a, slope=slope)

def gather_rows(a: Tensor, index: np.ndarray) -> Tensor:
    """Rows of a selected by index (repetitions allowed)."""
    index = np.asarray(index, dtype=np.int64)
    n_rows = a.rows

    def rule(grad):
        out = np.zeros((n_rows, grad.shape[1]))
        np.add.at(out, index, grad)
        return (out,)

    return make_result(a.values[index], (a,), rule)

def slice_rows(a: Tensor, start: int, stop: int) -> Tensor:
    """Rows start..stop-1 of a."""
    if not 0 <= start <= stop <= a.rows:
        raise DimensionError(f'Row slice [{start}:{stop}] out of range for shape {a.shape}')
    shape = a.shape

    def rule(grad):
        out = np.zeros(shape)
        out[start:stop] = grad
        return (out,)

    return make_result(a.values[start:stop], (a,), rule)

def concat_cols(tensors: Sequence[Tensor]) -> Tensor:
    """Concatenate tensors with equal row count side by side."""
    rows = {tensor.rows for tensor in tensors}
    if len(rows) != 1:
        raise DimensionError('concat_cols row mismatch: '
                             + ', '.join(str(tensor.shape) for tensor in tensors))
    bounds = np.cumsum([0] + [tensor.cols for tensor in tensors])

    def rule(grad):
        return tuple(grad[:, bounds[i]:bounds[i + 1]] for i in range(len(tensors)))

    return make_result(np.hstack([tensor.values for tensor in tensors]), tuple(tensors), rule)

def row_sum(a: Tensor) -> Tensor:
    """Sum over columns, n x 1 result."""
    cols = a.cols

    def rule(grad):
        return (np.repeat(grad, cols, axis=1),)

    return make_result(a.values.sum(axis=1, keepdims=True), (a,), rule)

def sum_all(a: Tensor) -> Tensor:
    """Sum of every entry, 1 x 1 result."""
    shape = a.shape

    def rule(grad):
        return (np.full(shape, grad[0, 0]),)

    return make_result(np.array([[a.values.sum()]]), (a,), rule)

def mean_all(a: Tensor) -> Tensor:
    """Mean of every entry, 1 x 1 result."""
    shape = a.shape
    size = a.values.size

    def rule(grad):
        return (np.full(shape, grad[0, 0] / size),)

    return make_result(np.array([[a.values.mean()]]), (a,), rule)

def scale(a: Tensor, factor: float) -> Tensor:
    """Multiply by a constant scalar."""
    factor = float(factor)

    def rule(grad):
        return (grad * factor,)

    return make_result(a.values * factor, (a,), rule)

# -*- coding: utf-8 -*-
"""Dense tensors and the define-by-run differentiation tape.

A Tape records every operation executed while it is the active tape of the
current thread. Leaves (model parameters, constant inputs) are registered
the first time an operation consumes them. Calling backward walks the
recorded operations in reverse order and accumulates gradients into every
tensor that requires them.

    Classes
    -------
    Tensor
        Two dimensional float64 array with an optional gradient.
    Tape
        Ordered record of operations, usable as a context manager.

    Functions
    ---------
    backward(loss: Tensor, tape: Tape)
        Reverse-mode gradient propagation from a scalar loss.
"""

import threading
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..util.exceptions import ContractError, DimensionError

GradientRule = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_ACTIVE = threading.local()

class Tensor:
    """Two dimensional float64 array participating in differentiation.

    Values are never modified by operations; the optimizer replaces them
    through assign outside any tape.
    """
    __slots__ = ('values', 'grad', 'requires_grad', 'node_id', 'name')

    def __init__(self, values, requires_grad: bool = False,
                 name: Optional[str] = None) -> None:
        array = np.array(values, dtype=np.float64)
        if array.ndim < 2:
            array = array.reshape(1, -1) if array.ndim == 1 else array.reshape(1, 1)
        if array.ndim != 2:
            raise DimensionError(f'Tensor must be two dimensional, got shape {array.shape}')
        self.values = array
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.node_id: Optional[int] = None
        self.name = name

    @classmethod
    def column(cls, values, requires_grad: bool = False) -> 'Tensor':
        """Build an n x 1 tensor from a flat sequence."""
        return cls(np.asarray(values, dtype=np.float64).reshape(-1, 1), requires_grad)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def zero_grad(self) -> None:
        self.grad = None

    def assign(self, values: np.ndarray) -> None:
        """Replace the values in place, keeping the shape."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise DimensionError(
                f'Cannot assign shape {values.shape} to tensor of shape {self.values.shape}')
        self.values = values.copy()

    def accumulate_grad(self, grad: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.array(grad, dtype=np.float64)
        else:
            self.grad = self.grad + grad

    def __repr__(self) -> str:
        label = f', name={self.name!r}' if self.name else ''
        return f'Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})'

    # Sugar for elementwise product; the implementation lives in ops.
    def __mul__(self, other: 'Tensor') -> 'Tensor':
        from .ops import elementwise  # pylint: disable=import-outside-toplevel
        return elementwise('mul', self, other)


@dataclass
class TapeEntry:
    """One recorded operation."""
    input_ids: Tuple[int, ...]
    output_id: int
    rule: GradientRule


class Tape:
    """Ordered record of differentiable operations.

    Use as a context manager; while inside the ``with`` block the tape is
    the active tape of the current thread and operations record on it.
    Tapes nest, the innermost one being active.
    """

    def __init__(self) -> None:
        self.entries: List[TapeEntry] = []
        self._tensors: List[Tensor] = []
        self._ids: Dict[int, int] = {}

    def __enter__(self) -> 'Tape':
        stack = getattr(_ACTIVE, 'stack', None)
        if stack is None:
            stack = _ACTIVE.stack = []
        stack.append(self)
        return self

    def __exit__(self, exc_type, exc_value, traceback) -> None:
        _ACTIVE.stack.pop()

    def __len__(self) -> int:
        return len(self.entries)

    def register(self, tensor: Tensor) -> int:
        """Return the node id of a tensor on this tape, assigning one if needed."""
        key = id(tensor)
        node_id = self._ids.get(key)
        if node_id is None:
            node_id = len(self._tensors)
            self._ids[key] = node_id
            self._tensors.append(tensor)
        tensor.node_id = node_id
        return node_id

    def contains(self, tensor: Tensor) -> bool:
        node_id = self._ids.get(id(tensor))
        return node_id is not None and self._tensors[node_id] is tensor

    def record(self, inputs: Sequence[Tensor], output: Tensor, rule: GradientRule) -> None:
        input_ids = tuple(self.register(tensor) for tensor in inputs)
        output_id = self.register(output)
        self.entries.append(TapeEntry(input_ids, output_id, rule))

    def tensor(self, node_id: int) -> Tensor:
        return self._tensors[node_id]


def active_tape() -> Optional[Tape]:
    """Innermost tape entered on the current thread, if any."""
    stack = getattr(_ACTIVE, 'stack', None)
    return stack[-1] if stack else None


def make_result(values: np.ndarray, inputs: Sequence[Tensor], rule: GradientRule) -> Tensor:
    """Wrap an operation result and record it on the active tape.

    The result requires gradients when any input does; only then is the
    operation recorded.
    """
    requires_grad = any(tensor.requires_grad for tensor in inputs)
    result = Tensor(values, requires_grad=requires_grad)
    tape = active_tape()
    if requires_grad and tape is not None:
        tape.record(inputs, result, rule)
    return result


def backward(loss: Tensor, tape: Tape) -> None:
    """Propagate gradients of a scalar loss through a tape.

    After the call, the grad field of every tensor on the tape that requires
    gradients holds the derivative of the loss with respect to it. Repeated
    calls without zero_grad accumulate.

    Parameters
    ----------
    loss : Tensor
        1 x 1 tensor produced on the tape.
    tape : Tape
        Tape holding the operations that produced the loss.

    Raises
    ------
    ContractError
        When the loss is not scalar or was not recorded on the tape.
    """
    if loss.shape != (1, 1):
        raise ContractError(f'backward needs a 1x1 loss, got shape {loss.shape}')
    if not tape.contains(loss):
        raise ContractError('loss was not recorded on the given tape')
    adjoints: Dict[int, np.ndarray] = {tape.register(loss): np.ones((1, 1))}
    for entry in reversed(tape.entries):
        upstream = adjoints.pop(entry.output_id, None)
        if upstream is None:
            continue
        tape.tensor(entry.output_id).accumulate_grad(upstream)
        input_grads = entry.rule(upstream)
        for input_id, grad in zip(entry.input_ids, input_grads):
            if grad is None or not tape.tensor(input_id).requires_grad:
                continue
            if input_id in adjoints:
                adjoints[input_id] = adjoints[input_id] + grad
            else:
                adjoints[input_id] = grad
    # Whatever remains belongs to leaves.
    for node_id in sorted(adjoints):
        tensor = tape.tensor(node_id)
        if tensor.requires_grad:
            tensor.accumulate_grad(adjoints[node_id])

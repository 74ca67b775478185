# -*- coding: utf-8 -*-
"""Adam optimizer over named tensors."""

from typing import Dict

import numpy as np

from ..diffcore import Tensor

class AdamOptimizer:
    """Adam with bias corrected moments and no weight decay.

    Tensors without a gradient are updated as if their gradient were zero.
    """

    def __init__(self, params: Dict[str, Tensor], lr: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> None:
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(tensor.values) for name, tensor in params.items()}
        self.v = {name: np.zeros_like(tensor.values) for name, tensor in params.items()}

    def zero_grad(self) -> None:
        for tensor in self.params.values():
            tensor.zero_grad()

    def step(self) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for name, tensor in self.params.items():
            grad = tensor.grad if tensor.grad is not None else np.zeros_like(tensor.values)
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * grad
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * grad ** 2
            m_hat = self.m[name] / correction1
            v_hat = self.v[name] / correction2
            tensor.assign(tensor.values - self.lr * m_hat / (np.sqrt(v_hat) + self.eps))

# -*- coding: utf-8 -*-
"""Regression metrics on the log-transformed target."""

from dataclasses import dataclass, asdict
from typing import Dict

import numpy as np

from ..util.exceptions import ContractError

@dataclass(frozen=True)
class Metrics:
    """Error summary of a prediction vector.

    Attributes
    ----------
    mse, mae, mape : float
        Mean squared, absolute and absolute percentage error.
    n : int
        Number of compared pairs.
    mape_excluded : int
        Pairs left out of the MAPE because the true value is exactly zero.
    """
    mse: float
    mae: float
    mape: float
    n: int
    mape_excluded: int = 0

    def as_dict(self, prefix: str = '') -> Dict[str, float]:
        return {prefix + key: value for key, value in asdict(self).items()}

def compute_metrics(y_hat, y_true) -> Metrics:
    """MSE, MAE and MAPE of predictions.

    Parameters
    ----------
    y_hat : array_like
        Predictions (log scale for the reported table).
    y_true : array_like
        True values on the same scale.

    Returns
    -------
    Metrics
        Summary; MAPE is averaged over the pairs with a nonzero true value
        and is 0 when there is none.

    Raises
    ------
    ContractError
        When the inputs are empty or differ in length.
    """
    y_hat = np.asarray(y_hat, dtype=np.float64).reshape(-1)
    y_true = np.asarray(y_true, dtype=np.float64).reshape(-1)
    if y_hat.shape != y_true.shape:
        raise ContractError(f'Length mismatch: {y_hat.shape[0]} predictions, '
                            f'{y_true.shape[0]} true values')
    if y_hat.shape[0] == 0:
        raise ContractError('Metrics need at least one pair')
    error = y_hat - y_true
    nonzero = y_true != 0
    mape = float(np.mean(np.abs(error[nonzero]) / np.abs(y_true[nonzero]))) \
        if nonzero.any() else 0.0
    return Metrics(float(np.mean(error ** 2)), float(np.mean(np.abs(error))), mape,
                   int(y_hat.shape[0]), int((~nonzero).sum()))

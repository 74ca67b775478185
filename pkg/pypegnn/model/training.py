# -*- coding: utf-8 -*-
"""Module responsible for training and inference.

This module is responsible for the folling task:
  - Run one optimization step on a minibatch: batch graph, Moran targets,
    forward, composite loss, backward and Adam update.
  - Run the epoch loop with per-epoch test curves and early stopping on the
    evaluation MAE, restoring the best parameters.
  - Predict over a dataset in deterministic batches.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import DefaultDict, Dict, List, Optional, Tuple

import numpy as np

from ..diffcore import Tape, backward
from ..moran import moran_target_for_batch
from ..pipeline import (PreparedData, SplitIndices, compute_metrics, iterate_batches,
                        ordered_batches)
from ..util.exceptions import NumericalError
from ..util.functions import get_logger, timing
from .optimizer import AdamOptimizer
from .pegnn import PeGnnModel, loss

logger = get_logger(__name__)

@dataclass(frozen=True)
class FitSettings:
    """Optimization settings of a training run."""
    epochs: int = 200
    batch_size: int = 512
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    patience: int = 20
    seed: int = 0

@dataclass
class TrainingHistory:
    """Outcome of fit.

    Attributes
    ----------
    epochs : List[Dict[str, float]]
        One row per epoch: train_loss, test_mse, test_mae, test_mape, eval_mae.
    best_epoch : int
        Epoch whose parameters were kept (1-based).
    stopped_early : bool
        Whether patience ran out before the last epoch.
    fallbacks : Dict[str, int]
        Counts of constant-batch Moran fallbacks.
    """
    epochs: List[Dict[str, float]] = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False
    fallbacks: Dict[str, int] = field(default_factory=dict)

def rng_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent generators for parameter initialization and batching."""
    init_seq, batch_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(init_seq), np.random.default_rng(batch_seq)

def train_step(model: PeGnnModel, batch: PreparedData, optimizer: AdamOptimizer,
               fallbacks: Optional[DefaultDict[str, int]] = None
              ) -> Tuple[PeGnnModel, float]:
    """One optimization step on a minibatch.

    Parameters
    ----------
    model : PeGnnModel
        Model updated in place.
    batch : PreparedData
        Batch features, normalized coordinates and log targets.
    optimizer : AdamOptimizer
        Optimizer built over model.parameters().
    fallbacks : DefaultDict[str, int], optional
        Counter of constant-batch Moran fallbacks.

    Returns
    -------
    Tuple[PeGnnModel, float]
        The model and the batch loss before the update.

    Raises
    ------
    NumericalError
        When the loss is not finite.
    """
    graph = model.build_graph(batch.coords)
    moran_target = moran_target_for_batch(batch.target_log, graph, fallbacks)
    optimizer.zero_grad()
    with Tape() as tape:
        y_hat, i_hat = model.forward(batch.features, batch.coords, graph)
        total = loss(y_hat, batch.target_log, i_hat, moran_target, model.lam)
    value = float(total.values[0, 0])
    if not np.isfinite(value):
        raise NumericalError(f'Non finite training loss {value}')
    backward(total, tape)
    optimizer.step()
    return model, value

def predict(model: PeGnnModel, data: PreparedData,
            batch_size: int = 512) -> Tuple[np.ndarray, np.ndarray]:
    """Target and Moran's I predictions for every row of data.

    Rows are processed in index ordered batches, each with its own kNN graph.
    """
    y_hat = np.zeros(len(data))
    i_hat = np.zeros(len(data))
    for index in ordered_batches(len(data), batch_size):
        batch = data.subset(index)
        graph = model.build_graph(batch.coords)
        y_batch, i_batch = model.forward(batch.features, batch.coords, graph)
        y_hat[index] = y_batch.values[:, 0]
        i_hat[index] = i_batch.values[:, 0]
    return y_hat, i_hat

def _snapshot(model: PeGnnModel) -> Dict[str, np.ndarray]:
    return {name: tensor.values.copy() for name, tensor in model.parameters().items()}

def _restore(model: PeGnnModel, snapshot: Dict[str, np.ndarray]) -> None:
    for name, tensor in model.parameters().items():
        tensor.assign(snapshot[name])

@timing
def _run_epoch(model: PeGnnModel, train: PreparedData, optimizer: AdamOptimizer,
               batch_size: int, rng: np.random.Generator,
               fallbacks: DefaultDict[str, int]) -> float:
    losses = []
    for index in iterate_batches(np.arange(len(train)), batch_size, rng):
        _, batch_loss = train_step(model, train.subset(index), optimizer, fallbacks)
        losses.append(batch_loss)
    return float(np.mean(losses))

def fit(model: PeGnnModel, data: PreparedData, splits: SplitIndices,
        settings: FitSettings = FitSettings()) -> TrainingHistory:
    """Train a model on the training split.

    After every epoch the test split metrics (log scale) and the evaluation
    split MAE are recorded. Training stops once the evaluation MAE has not
    improved for ``patience`` epochs; the best parameters are restored.

    Parameters
    ----------
    model : PeGnnModel
        Freshly initialized model, trained in place.
    data : PreparedData
        All rows, indexed by splits.
    splits : SplitIndices
        Train, test and evaluation rows.
    settings : FitSettings
        Optimization settings.

    Returns
    -------
    TrainingHistory
        Per epoch curves and the selected epoch.
    """
    _, batch_rng = rng_streams(settings.seed)
    optimizer = AdamOptimizer(model.parameters(), settings.lr, settings.beta1,
                              settings.beta2, settings.eps)
    train, test, evaluation = (data.subset(index) for index in splits)
    fallbacks: DefaultDict[str, int] = defaultdict(int)
    history = TrainingHistory()
    best_mae, best_params, waited = np.inf, _snapshot(model), 0
    for epoch in range(1, settings.epochs + 1):
        train_loss, elapsed = _run_epoch(model, train, optimizer, settings.batch_size,
                                         batch_rng, fallbacks)
        test_pred, _ = predict(model, test, settings.batch_size)
        eval_pred, _ = predict(model, evaluation, settings.batch_size)
        test_metrics = compute_metrics(test_pred, test.target_log)
        eval_mae = compute_metrics(eval_pred, evaluation.target_log).mae
        history.epochs.append({'epoch': epoch, 'train_loss': train_loss,
                               'test_mse': test_metrics.mse, 'test_mae': test_metrics.mae,
                               'test_mape': test_metrics.mape, 'eval_mae': eval_mae})
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug('epoch %d: loss=%.5f test_mse=%.5f eval_mae=%.5f (%.2fs)',
                         epoch, train_loss, test_metrics.mse, eval_mae, elapsed)
        if eval_mae < best_mae:
            best_mae, best_params, waited = eval_mae, _snapshot(model), 0
            history.best_epoch = epoch
        else:
            waited += 1
            if waited >= settings.patience:
                history.stopped_early = True
                logger.info('Early stop at epoch %d, best epoch %d', epoch, history.best_epoch)
                break
    _restore(model, best_params)
    history.fallbacks = dict(fallbacks)
    return history

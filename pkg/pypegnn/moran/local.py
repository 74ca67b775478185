# -*- coding: utf-8 -*-
"""Local Moran's I over a batch graph.

With z_i = y_i - mean(y) and m2 = mean(z^2), the local indicator is

    I_i = (z_i / m2) * sum_j w_ij z_j

where w_ij are row-standardized weights over the in-neighbours of i.
The values serve as targets of the auxiliary head and never carry
gradients.
"""

from dataclasses import dataclass
from typing import DefaultDict, Optional

import numpy as np

from ..spatialgraph import SpatialGraph, row_standardized_weights
from ..util.exceptions import ContractError
from ..util.functions import get_logger

logger = get_logger(__name__)

WEIGHT_SCHEME = 'row-standardized-knn'

@dataclass(frozen=True)
class LocalMoran:
    """Per node local Moran's I.

    Attributes
    ----------
    values : np.ndarray
        I_i for every node.
    weight_scheme : str
        Description of the spatial weights used.
    """
    values: np.ndarray
    weight_scheme: str = WEIGHT_SCHEME

    def mean(self) -> float:
        return float(np.mean(self.values))

def local_moran(y, graph: SpatialGraph) -> LocalMoran:
    """Local Moran's I of a value vector.

    Parameters
    ----------
    y : array_like
        One value per node.
    graph : SpatialGraph
        Graph whose in-neighbourhoods define the spatial lag.

    Returns
    -------
    LocalMoran
        Indicator values with the weight scheme descriptor.

    Raises
    ------
    ContractError
        When n < 2, y does not match the graph, a node is isolated or the
        field is constant.
    """
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape[0] != graph.n_nodes:
        raise ContractError(f'y has {y.shape[0]} values but the graph has {graph.n_nodes} nodes')
    if y.shape[0] < 2:
        raise ContractError('local Moran needs at least 2 values')
    if np.ptp(y) == 0:
        raise ContractError('constant field: local Moran is undefined for zero variance')
    weights = row_standardized_weights(graph)
    deviations = y - y.mean()
    second_moment = np.mean(deviations ** 2)
    lag = np.zeros(graph.n_nodes)
    np.add.at(lag, graph.targets, weights * deviations[graph.sources])
    return LocalMoran(deviations / second_moment * lag)

def moran_target_for_batch(y_batch, graph: SpatialGraph,
                           fallbacks: Optional[DefaultDict[str, int]] = None) -> np.ndarray:
    """Auxiliary targets for one minibatch.

    The statistic is computed on the batch graph only; as minibatches are
    reshuffled each epoch the neighbour sets, and hence the targets, change.

    Parameters
    ----------
    y_batch : array_like
        Targets of the batch points.
    graph : SpatialGraph
        kNN graph built over the batch.
    fallbacks : DefaultDict[str, int], optional
        Counter incremented under 'constant_batch' when the zero fallback
        is used.

    Returns
    -------
    np.ndarray
        Local Moran's I per batch point, zeros for a constant batch.
    """
    y_batch = np.asarray(y_batch, dtype=np.float64).reshape(-1)
    if y_batch.shape[0] >= 2 and np.ptp(y_batch) == 0:
        logger.warning('Constant target over a batch of %d points, '
                       'using zero Moran targets', y_batch.shape[0])
        if fallbacks is not None:
            fallbacks['constant_batch'] += 1
        return np.zeros(y_batch.shape[0])
    return local_moran(y_batch, graph).values

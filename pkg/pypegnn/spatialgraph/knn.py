# -*- coding: utf-8 -*-
"""Module responsible for building per-batch spatial graphs.

This module is responsible for the folling task:
  - Build directed k-nearest-neighbour graphs over 2-D coordinates, exact
    and with deterministic tie breaking (smaller node index first).
  - Optionally symmetrize a graph or weight its edges by inverse distance.
  - Provide row-standardized spatial weights for autocorrelation statistics.

Coordinates are treated as planar; longitude/latitude pairs are used as
given, without great-circle correction.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..util.exceptions import ContractError, DataError
from ..util.functions import get_logger

logger = get_logger(__name__)

METRICS = ('euclidean',)
EDGE_WEIGHT_SCHEMES = ('binary', 'inverse_distance')

def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array

@dataclass(frozen=True)
class SpatialGraph:
    """Directed edge list over a batch of nodes.

    Edges are stored as parallel source/target arrays sorted by
    (target, source). Self loops are never stored.

    Attributes
    ----------
    n_nodes : int
        Number of nodes.
    sources : np.ndarray
        Source node j of every edge (j -> i).
    targets : np.ndarray
        Target node i of every edge.
    coords : np.ndarray
        n x 2 coordinates the graph was built from.
    edge_weight : np.ndarray, optional
        Scalar weight e_{j,i} per edge; None means 1 for every edge.
    """
    n_nodes: int
    sources: np.ndarray
    targets: np.ndarray
    coords: np.ndarray
    edge_weight: Optional[np.ndarray] = None

    @property
    def n_edges(self) -> int:
        return int(self.sources.shape[0])

    @property
    def edges(self) -> List[Tuple[int, int]]:
        """Edges as (source, target) pairs in canonical order."""
        return list(zip(self.sources.tolist(), self.targets.tolist()))

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.targets, minlength=self.n_nodes)

    def weights(self) -> np.ndarray:
        """Edge weights, ones when none are stored."""
        if self.edge_weight is None:
            return np.ones(self.n_edges)
        return self.edge_weight

    def with_edge_weight(self, edge_weight: Optional[np.ndarray]) -> 'SpatialGraph':
        if edge_weight is not None:
            edge_weight = _frozen(np.asarray(edge_weight, dtype=np.float64).copy())
            if edge_weight.shape != (self.n_edges,):
                raise ContractError(
                    f'edge_weight needs {self.n_edges} entries, got {edge_weight.shape}')
        return SpatialGraph(self.n_nodes, self.sources, self.targets, self.coords, edge_weight)

def _canonical(n_nodes: int, sources: np.ndarray, targets: np.ndarray,
               coords: np.ndarray) -> SpatialGraph:
    order = np.lexsort((sources, targets))
    return SpatialGraph(n_nodes,
                        _frozen(sources[order].astype(np.int64)),
                        _frozen(targets[order].astype(np.int64)),
                        _frozen(coords.copy()))

def _validated_coords(coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ContractError(f'coords must be an n x 2 array, got shape {coords.shape}')
    finite = np.isfinite(coords).all(axis=1)
    if not finite.all():
        row = int(np.flatnonzero(~finite)[0])
        raise DataError(f'Non finite coordinate at row {row}: {coords[row].tolist()}')
    return coords

def knn_graph(coords, k: int = 5, metric: str = 'euclidean') -> SpatialGraph:
    """Build the directed k-nearest-neighbour graph of a point set.

    Every node i receives edges j -> i from its k nearest distinct nodes
    (all n - 1 others when n <= k). Distance ties are broken by the smaller
    node index. A kd-tree supplies candidates within the k-th neighbour
    radius; the final choice uses exact squared distances, so the result
    equals a brute force scan.

    Parameters
    ----------
    coords : array_like
        n x 2 coordinates.
    k : int
        Number of neighbours per node.
    metric : str
        Distance metric, only euclidean is supported.

    Returns
    -------
    SpatialGraph
        Graph in canonical (target, source) order without edge weights.

    Raises
    ------
    ContractError
        When n < 2, k < 1 or the coordinates are not n x 2.
    DataError
        When a coordinate is not finite (the row index is reported).
    """
    if metric not in METRICS:
        raise ValueError(f'Unsupported metric {metric!r}, expected one of {METRICS}')
    coords = _validated_coords(coords)
    n_nodes = coords.shape[0]
    if n_nodes < 2:
        raise ContractError(f'knn_graph needs at least 2 nodes, got {n_nodes}')
    if k < 1:
        raise ContractError(f'k must be at least 1, got {k}')
    k_eff = min(int(k), n_nodes - 1)
    tree = cKDTree(coords)
    # The (k_eff + 1)-th smallest distance counts the node itself at 0.
    distances, _ = tree.query(coords, k=k_eff + 1)
    radii = distances[:, k_eff]
    sources = np.empty(n_nodes * k_eff, dtype=np.int64)
    for node in range(n_nodes):
        radius = radii[node] * (1.0 + 1e-9) + 1e-300
        candidates = np.asarray(tree.query_ball_point(coords[node], radius), dtype=np.int64)
        candidates = candidates[candidates != node]
        squared = np.sum((coords[candidates] - coords[node]) ** 2, axis=1)
        nearest = candidates[np.lexsort((candidates, squared))[:k_eff]]
        sources[node * k_eff:(node + 1) * k_eff] = nearest
    targets = np.repeat(np.arange(n_nodes, dtype=np.int64), k_eff)
    logger.debug('knn graph: %d nodes, k=%d, %d edges', n_nodes, k_eff, sources.shape[0])
    return _canonical(n_nodes, sources, targets, coords)

def symmetrize(graph: SpatialGraph) -> SpatialGraph:
    """Add the reverse of every edge, dropping duplicates.

    Stored edge weights are discarded; recompute them on the result.
    """
    sources = np.concatenate([graph.sources, graph.targets])
    targets = np.concatenate([graph.targets, graph.sources])
    pairs = np.unique(np.stack([targets, sources], axis=1), axis=0)
    return _canonical(graph.n_nodes, pairs[:, 1], pairs[:, 0], graph.coords)

def inverse_distance_weights(graph: SpatialGraph) -> np.ndarray:
    """Edge weights 1 / distance(j, i), capped for coincident points."""
    offsets = graph.coords[graph.sources] - graph.coords[graph.targets]
    distances = np.sqrt(np.sum(offsets ** 2, axis=1))
    positive = distances[distances > 0]
    floor = positive.min() if positive.size else 1.0
    return 1.0 / np.maximum(distances, floor)

def row_standardized_weights(graph: SpatialGraph) -> np.ndarray:
    """Row-standardized binary spatial weights.

    Parameters
    ----------
    graph : SpatialGraph
        Graph whose incoming edges define the neighbourhoods.

    Returns
    -------
    np.ndarray
        Weight 1 / in_degree(i) for every edge j -> i, so the incoming
        weights of each node sum to one.

    Raises
    ------
    ContractError
        When a node has no incoming edge.
    """
    degree = graph.in_degree()
    isolated = np.flatnonzero(degree == 0)
    if isolated.size:
        raise ContractError(f'Node {int(isolated[0])} has no incoming edge')
    return 1.0 / degree[graph.targets]

def build_batch_graph(coords, k: int = 5, symmetric: bool = False,
                      edge_weights: str = 'binary') -> SpatialGraph:
    """kNN graph with the configured symmetry and edge weight scheme.

    A single point yields an edgeless graph, on which only operators with a
    self loop (gcn, gat) are defined.
    """
    if edge_weights not in EDGE_WEIGHT_SCHEMES:
        raise ValueError(f'Unknown edge weight scheme {edge_weights!r}')
    coords = _validated_coords(coords)
    if coords.shape[0] == 1:
        empty = np.zeros(0, dtype=np.int64)
        return _canonical(1, empty, empty, coords)
    graph = knn_graph(coords, k)
    if symmetric:
        graph = symmetrize(graph)
    if edge_weights == 'inverse_distance':
        graph = graph.with_edge_weight(inverse_distance_weights(graph))
    return graph

# -*- coding: utf-8 -*-
"""Message passing operators over a SpatialGraph.

Four operators share the neighbourhood aggregation scheme: messages are
built per edge j -> i by gathering source rows, then reduced per target
node with segment operations. None of them carries a bias.

    gcn          x'_i = T^T sum_{j in N(i)+i} e_ji / sqrt(d_j d_i) x_j
    sage         x'_i = W1 x_i + W2 mean_{j in N(i)} x_j
    transformer  x'_i = W1 x_i + sum_{j in N(i)} a_ij W2 x_j,
                 a_ij = softmax_j((W3 x_i)^T (W4 x_j) / sqrt(d))
    gat          x'_i = sum_{j in N(i)+i} a_ij T x_j,
                 a_ij = softmax_j(LeakyReLU(a^T [T x_i || T x_j]))

Weights are stored input-major (in_dim x out_dim) so x @ W applies them.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..diffcore import (Tensor, matmul, elementwise, leaky_relu, gather_rows,
                        slice_rows, row_sum, scale, segment_reduce, segment_softmax,
                        uniform_parameter)
from ..spatialgraph import SpatialGraph
from ..util.exceptions import ContractError, DimensionError

OPERATOR_KINDS = ('gcn', 'sage', 'transformer', 'gat')

# Their neighbour mean or softmax is undefined for a node without in-neighbours.
NEIGHBOUR_KINDS = ('sage', 'transformer')

_PARAMETER_NAMES = {
    'gcn': ('theta',),
    'sage': ('w1', 'w2'),
    'transformer': ('w1', 'w2', 'w3', 'w4'),
    'gat': ('theta', 'att'),
}

@dataclass
class OperatorLayer:
    """Parameters of one message passing layer.

    Attributes
    ----------
    kind : str
        gcn, sage, transformer or gat.
    in_dim, out_dim : int
        Input and output channel widths.
    params : Dict[str, Tensor]
        gcn: theta; sage: w1, w2; transformer: w1..w4 (w3/w4 are the
        query/key maps of width out_dim); gat: theta and the attention
        vector att of length 2 * out_dim.
    slope : float
        LeakyReLU negative slope of gat attention logits.
    """
    kind: str
    in_dim: int
    out_dim: int
    params: Dict[str, Tensor] = field(default_factory=dict)
    slope: float = 0.2

    def __post_init__(self) -> None:
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f'Unknown operator {self.kind!r}, expected one of {OPERATOR_KINDS}')
        expected = _PARAMETER_NAMES[self.kind]
        if sorted(self.params) != sorted(expected):
            raise ContractError(f'{self.kind} layer needs parameters {expected}, '
                                f'got {tuple(self.params)}')
        for name, tensor in self.params.items():
            shape = (2 * self.out_dim, 1) if name == 'att' else (self.in_dim, self.out_dim)
            if tensor.shape != shape:
                raise DimensionError(
                    f'{self.kind}.{name} must have shape {shape}, got {tensor.shape}')

    @classmethod
    def initialize(cls, kind: str, in_dim: int, out_dim: int,
                   rng: np.random.Generator, slope: float = 0.2,
                   prefix: str = '') -> 'OperatorLayer':
        """Layer with uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights."""
        if kind not in OPERATOR_KINDS:
            raise ValueError(f'Unknown operator {kind!r}, expected one of {OPERATOR_KINDS}')
        params = {}
        for name in _PARAMETER_NAMES[kind]:
            if name == 'att':
                params[name] = uniform_parameter(rng, 2 * out_dim, 1, prefix + name)
            else:
                params[name] = uniform_parameter(rng, in_dim, out_dim, prefix + name)
        return cls(kind, in_dim, out_dim, params, slope)

def _check_input(layer: OperatorLayer, kind: str, x: Tensor, graph: SpatialGraph) -> None:
    if layer.kind != kind:
        raise ContractError(f'{kind}_forward called with a {layer.kind} layer')
    if x.rows != graph.n_nodes:
        raise DimensionError(f'x has {x.rows} rows but the graph has {graph.n_nodes} nodes')
    if x.cols != layer.in_dim:
        raise DimensionError(f'x has shape {x.shape} but the layer expects {layer.in_dim} columns')

def _require_neighbours(graph: SpatialGraph, kind: str) -> None:
    isolated = np.flatnonzero(graph.in_degree() == 0)
    if isolated.size:
        raise ContractError(
            f'{kind} is undefined for node {int(isolated[0])} without in-neighbours')

def _with_self_loops(graph: SpatialGraph) -> Tuple[np.ndarray, np.ndarray]:
    nodes = np.arange(graph.n_nodes, dtype=np.int64)
    return (np.concatenate([graph.sources, nodes]),
            np.concatenate([graph.targets, nodes]))

def gcn_normalization(graph: SpatialGraph) -> np.ndarray:
    """Coefficients e_ji / sqrt(d_j d_i) for edges, then 1 / d_i for self loops.

    d_i = 1 + sum of incoming edge weights.
    """
    weights = graph.weights()
    degree = np.ones(graph.n_nodes)
    np.add.at(degree, graph.targets, weights)
    edge_coef = weights / np.sqrt(degree[graph.sources] * degree[graph.targets])
    return np.concatenate([edge_coef, 1.0 / degree])

def gcn_forward(layer: OperatorLayer, x: Tensor, graph: SpatialGraph) -> Tensor:
    """Symmetric normalized graph convolution with self loops."""
    _check_input(layer, 'gcn', x, graph)
    sources, targets = _with_self_loops(graph)
    coef = Tensor(gcn_normalization(graph).reshape(-1, 1))
    messages = elementwise('mul', gather_rows(x, sources), coef)
    aggregated = segment_reduce('sum', messages, targets, graph.n_nodes)
    return matmul(aggregated, layer.params['theta'])

def sage_forward(layer: OperatorLayer, x: Tensor, graph: SpatialGraph) -> Tensor:
    """Root transform plus transformed mean of in-neighbours."""
    _check_input(layer, 'sage', x, graph)
    _require_neighbours(graph, 'sage')
    neighbour_mean = segment_reduce('mean', gather_rows(x, graph.sources),
                                    graph.targets, graph.n_nodes)
    return elementwise('add', matmul(x, layer.params['w1']),
                       matmul(neighbour_mean, layer.params['w2']))

def transformer_attention(layer: OperatorLayer, x: Tensor, graph: SpatialGraph) -> Tensor:
    """Attention coefficients per edge, normalized over N(i) without self."""
    query = matmul(x, layer.params['w3'])
    key = matmul(x, layer.params['w4'])
    scores = row_sum(elementwise('mul', gather_rows(query, graph.targets),
                                 gather_rows(key, graph.sources)))
    scores = scale(scores, 1.0 / np.sqrt(layer.out_dim))
    return segment_softmax(scores, graph.targets, graph.n_nodes)

def transformer_forward(layer: OperatorLayer, x: Tensor, graph: SpatialGraph) -> Tensor:
    """Scaled dot product attention over in-neighbours plus root transform."""
    _check_input(layer, 'transformer', x, graph)
    _require_neighbours(graph, 'transformer')
    alpha = transformer_attention(layer, x, graph)
    values = gather_rows(matmul(x, layer.params['w2']), graph.sources)
    aggregated = segment_reduce('sum', elementwise('mul', values, alpha),
                                graph.targets, graph.n_nodes)
    return elementwise('add', matmul(x, layer.params['w1']), aggregated)

def gat_attention(layer: OperatorLayer, projected: Tensor,
                  graph: SpatialGraph) -> Tuple[Tensor, np.ndarray, np.ndarray]:
    """Attention over N(i) and i itself.

    Returns the coefficient column and the extended (source, target) arrays
    it is aligned with: graph edges first, then one self pair per node.
    """
    sources, targets = _with_self_loops(graph)
    att = layer.params['att']
    # a^T [h_i || h_j] splits into a target part and a source part.
    target_score = matmul(projected, slice_rows(att, 0, layer.out_dim))
    source_score = matmul(projected, slice_rows(att, layer.out_dim, 2 * layer.out_dim))
    logits = elementwise('add', gather_rows(target_score, targets),
                         gather_rows(source_score, sources))
    alpha = segment_softmax(leaky_relu(logits, layer.slope), targets, graph.n_nodes)
    return alpha, sources, targets

def gat_forward(layer: OperatorLayer, x: Tensor, graph: SpatialGraph) -> Tensor:
    """Single head graph attention including the self pair."""
    _check_input(layer, 'gat', x, graph)
    projected = matmul(x, layer.params['theta'])
    alpha, sources, targets = gat_attention(layer, projected, graph)
    messages = elementwise('mul', gather_rows(projected, sources), alpha)
    return segment_reduce('sum', messages, targets, graph.n_nodes)

_FORWARDS = {
    'gcn': gcn_forward,
    'sage': sage_forward,
    'transformer': transformer_forward,
    'gat': gat_forward,
}

def apply_layer(layer: OperatorLayer, x: Tensor, graph: SpatialGraph,
                activation: Optional[str] = 'relu') -> Tensor:
    """Run the forward of the layer's kind, optionally followed by relu."""
    out = _FORWARDS[layer.kind](layer, x, graph)
    if activation == 'relu':
        out = elementwise('relu', out)
    elif activation is not None:
        raise ValueError(f'Unknown activation {activation!r}')
    return out

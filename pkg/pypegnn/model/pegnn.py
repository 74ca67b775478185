# -*- coding: utf-8 -*-
"""Positional encoder graph neural network.

The node features are concatenated with the positional embedding of the
node coordinates, passed through two shared message passing layers with
relu, and read out by two linear heads: one for the target, one for the
local Moran's I of the target.
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Tuple

import numpy as np

from ..diffcore import (Tensor, matmul, elementwise, concat_cols, mean_all, scale,
                        uniform_parameter, zero_parameter)
from ..gnnops import OperatorLayer, OPERATOR_KINDS, apply_layer
from ..posenc import PosEncoderParams, encode, zero_embedding
from ..spatialgraph import SpatialGraph, build_batch_graph, EDGE_WEIGHT_SCHEMES
from ..util.exceptions import ContractError, DimensionError

N_LAYERS = 2

@dataclass(frozen=True)
class ModelSpec:
    """Architecture and graph settings of a PeGnnModel."""
    n_features: int
    operator: str = 'sage'
    lam: float = 0.5
    k: int = 5
    embed_dim: int = 64
    hidden_dim: int = 64
    n_scales: int = 16
    sigma_min: float = 0.01
    sigma_max: float = 1.0
    slope: float = 0.2
    use_posenc: bool = True
    symmetric: bool = False
    edge_weights: str = 'binary'

    def __post_init__(self) -> None:
        if self.operator not in OPERATOR_KINDS:
            raise ContractError(f'Unknown operator {self.operator!r}')
        if not 0.0 <= self.lam <= 1.0:
            raise ContractError(f'lambda must lie in [0, 1], got {self.lam}')
        if self.edge_weights not in EDGE_WEIGHT_SCHEMES:
            raise ContractError(f'Unknown edge weight scheme {self.edge_weights!r}')
        for name in ('n_features', 'k', 'embed_dim', 'hidden_dim', 'n_scales'):
            if getattr(self, name) < 1:
                raise ContractError(f'{name} must be positive, got {getattr(self, name)}')

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

class PeGnnModel:
    """Positional encoder, shared operator trunk and two prediction heads.

    Parameters are created by initialize or restored from a checkpoint;
    every trainable tensor is reachable through parameters().
    """

    def __init__(self, spec: ModelSpec, posenc: PosEncoderParams,
                 layers: List[OperatorLayer], head_main: Dict[str, Tensor],
                 head_moran: Dict[str, Tensor]) -> None:
        if len(layers) != N_LAYERS:
            raise ContractError(f'Expected {N_LAYERS} operator layers, got {len(layers)}')
        if posenc.embed_dim != spec.embed_dim:
            raise DimensionError(f'Positional embedding width {posenc.embed_dim} '
                                 f'does not match embed_dim {spec.embed_dim}')
        self.spec = spec
        self.posenc = posenc
        self.layers = layers
        self.head_main = head_main
        self.head_moran = head_moran

    @classmethod
    def initialize(cls, spec: ModelSpec, rng: np.random.Generator) -> 'PeGnnModel':
        posenc = PosEncoderParams.initialize(rng, spec.embed_dim, spec.n_scales,
                                             spec.sigma_min, spec.sigma_max)
        widths = [spec.n_features + spec.embed_dim] + [spec.hidden_dim] * N_LAYERS
        layers = [OperatorLayer.initialize(spec.operator, widths[i], widths[i + 1], rng,
                                           spec.slope, prefix=f'layer{i}.')
                  for i in range(N_LAYERS)]
        heads = []
        for name in ('head_main', 'head_moran'):
            heads.append({'w': uniform_parameter(rng, spec.hidden_dim, 1, f'{name}.w'),
                          'b': zero_parameter(1, 1, f'{name}.b')})
        return cls(spec, posenc, layers, heads[0], heads[1])

    @property
    def lam(self) -> float:
        return self.spec.lam

    def parameters(self) -> Dict[str, Tensor]:
        """Every trainable tensor keyed by a stable dotted name."""
        params = dict(self.posenc.parameters())
        for position, layer in enumerate(self.layers):
            for name, tensor in layer.params.items():
                params[f'layer{position}.{name}'] = tensor
        for head_name, head in (('head_main', self.head_main), ('head_moran', self.head_moran)):
            for name, tensor in head.items():
                params[f'{head_name}.{name}'] = tensor
        return params

    def build_graph(self, coords) -> SpatialGraph:
        return build_batch_graph(coords, self.spec.k, self.spec.symmetric,
                                 self.spec.edge_weights)

    def forward(self, features, coords, graph: SpatialGraph) -> Tuple[Tensor, Tensor]:
        """Predictions of both heads.

        Parameters
        ----------
        features : array_like or Tensor
            n x F node features.
        coords : array_like
            n x 2 normalized coordinates of the same nodes.
        graph : SpatialGraph
            Graph built over the n nodes.

        Returns
        -------
        Tuple[Tensor, Tensor]
            n x 1 target prediction and n x 1 Moran's I prediction.

        Raises
        ------
        DimensionError
            When the feature count or node counts disagree.
        """
        if not isinstance(features, Tensor):
            features = Tensor(np.asarray(features, dtype=np.float64)
                              .reshape(len(features), -1))
        if features.cols != self.spec.n_features:
            raise DimensionError(f'Model expects {self.spec.n_features} features, '
                                 f'got shape {features.shape}')
        coords = np.asarray(coords, dtype=np.float64)
        if coords.shape[0] != features.rows or graph.n_nodes != features.rows:
            raise DimensionError(f'{features.rows} feature rows, {coords.shape[0]} coordinates '
                                 f'and {graph.n_nodes} graph nodes')
        if self.spec.use_posenc:
            embedding = encode(coords, self.posenc)
        else:
            embedding = zero_embedding(features.rows, self.posenc)
        hidden = concat_cols([features, embedding])
        for layer in self.layers:
            hidden = apply_layer(layer, hidden, graph, activation='relu')
        y_hat = elementwise('add', matmul(hidden, self.head_main['w']), self.head_main['b'])
        i_hat = elementwise('add', matmul(hidden, self.head_moran['w']), self.head_moran['b'])
        return y_hat, i_hat

def _mse(prediction: Tensor, truth) -> Tensor:
    residual = elementwise('sub', prediction, Tensor.column(truth))
    return mean_all(elementwise('mul', residual, residual))

def loss(y_hat: Tensor, y_true, i_hat: Tensor, i_true, lam: float) -> Tensor:
    """Composite loss MSE(y_hat, y) + lam * MSE(i_hat, I).

    Raises
    ------
    ContractError
        When lengths differ or lam is outside [0, 1].
    """
    y_true = np.asarray(y_true, dtype=np.float64).reshape(-1)
    i_true = np.asarray(i_true, dtype=np.float64).reshape(-1)
    lengths = {y_hat.rows, i_hat.rows, y_true.shape[0], i_true.shape[0]}
    if len(lengths) != 1 or y_hat.cols != 1 or i_hat.cols != 1:
        raise ContractError(f'Loss length mismatch: y_hat {y_hat.shape}, y {y_true.shape}, '
                            f'i_hat {i_hat.shape}, I {i_true.shape}')
    if not 0.0 <= lam <= 1.0:
        raise ContractError(f'lambda must lie in [0, 1], got {lam}')
    return elementwise('add', _mse(y_hat, y_true), scale(_mse(i_hat, i_true), lam))

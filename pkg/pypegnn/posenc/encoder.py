# -*- coding: utf-8 -*-
"""Positional encoder: coordinates to spatial context embeddings.

Coordinates (min-max normalized upstream) are expanded into sinusoidal
features over geometrically spaced wavelengths, then passed through a one
hidden layer network whose weights train with the rest of the model.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..diffcore import Tensor, matmul, elementwise, relu
from ..diffcore import uniform_parameter, zero_parameter
from ..util.exceptions import ContractError, DataError

def _check_scales(n_scales: int, sigma_min: float, sigma_max: float) -> None:
    if n_scales < 1:
        raise ContractError(f'n_scales must be at least 1, got {n_scales}')
    if not 0 < sigma_min < sigma_max:
        raise ContractError('Wavelengths must satisfy 0 < sigma_min < sigma_max, got '
                            f'{sigma_min} and {sigma_max}')

@dataclass
class PosEncoderParams:
    """Wavelength grid and network weights of the positional encoder.

    Attributes
    ----------
    n_scales : int
        Number of wavelengths G.
    sigma_min, sigma_max : float
        Smallest and largest wavelength.
    w_hidden, b_hidden : Tensor
        4G x embed_dim weight and 1 x embed_dim bias of the hidden layer.
    w_out, b_out : Tensor
        embed_dim x embed_dim weight and 1 x embed_dim bias of the output layer.
    """
    n_scales: int
    sigma_min: float
    sigma_max: float
    w_hidden: Tensor
    b_hidden: Tensor
    w_out: Tensor
    b_out: Tensor

    def __post_init__(self) -> None:
        _check_scales(self.n_scales, self.sigma_min, self.sigma_max)
        if self.w_hidden.rows != 4 * self.n_scales:
            raise ContractError(f'w_hidden needs {4 * self.n_scales} rows, '
                                f'got {self.w_hidden.rows}')

    @property
    def embed_dim(self) -> int:
        return self.w_out.cols

    def wavelengths(self) -> np.ndarray:
        """sigma_g for g = 0..G-1, geometric from sigma_min to sigma_max."""
        if self.n_scales == 1:
            return np.array([self.sigma_min])
        exponents = np.arange(self.n_scales) / (self.n_scales - 1)
        return self.sigma_min * (self.sigma_max / self.sigma_min) ** exponents

    def parameters(self) -> Dict[str, Tensor]:
        return {'posenc.w_hidden': self.w_hidden, 'posenc.b_hidden': self.b_hidden,
                'posenc.w_out': self.w_out, 'posenc.b_out': self.b_out}

    @classmethod
    def initialize(cls, rng: np.random.Generator, embed_dim: int = 64,
                   n_scales: int = 16, sigma_min: float = 0.01,
                   sigma_max: float = 1.0) -> 'PosEncoderParams':
        _check_scales(n_scales, sigma_min, sigma_max)
        if embed_dim < 1:
            raise ContractError(f'embed_dim must be at least 1, got {embed_dim}')
        n_features = 4 * n_scales
        return cls(n_scales, sigma_min, sigma_max,
                   uniform_parameter(rng, n_features, embed_dim, 'posenc.w_hidden'),
                   zero_parameter(1, embed_dim, 'posenc.b_hidden'),
                   uniform_parameter(rng, embed_dim, embed_dim, 'posenc.w_out'),
                   zero_parameter(1, embed_dim, 'posenc.b_out'))

def sinusoidal_features(coords, params: PosEncoderParams) -> np.ndarray:
    """Multi-scale sine/cosine features of 2-D coordinates.

    For every scale g the columns [sin(x/s), cos(x/s), sin(y/s), cos(y/s)]
    are emitted with s the g-th wavelength.

    Parameters
    ----------
    coords : array_like
        n x 2 coordinates.
    params : PosEncoderParams
        Encoder holding the wavelength grid.

    Returns
    -------
    np.ndarray
        n x 4G features, not trainable.
    """
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ContractError(f'coords must be an n x 2 array, got shape {coords.shape}')
    if not np.isfinite(coords).all():
        row = int(np.flatnonzero(~np.isfinite(coords).all(axis=1))[0])
        raise DataError(f'Non finite coordinate at row {row}')
    scaled_x = coords[:, [0]] / params.wavelengths()[None, :]
    scaled_y = coords[:, [1]] / params.wavelengths()[None, :]
    blocks = np.stack([np.sin(scaled_x), np.cos(scaled_x),
                       np.sin(scaled_y), np.cos(scaled_y)], axis=2)
    return blocks.reshape(coords.shape[0], 4 * params.n_scales)

def encode(coords, params: PosEncoderParams) -> Tensor:
    """Spatial context embedding of each coordinate.

    Parameters
    ----------
    coords : array_like
        n x 2 coordinates.
    params : PosEncoderParams
        Encoder weights.

    Returns
    -------
    Tensor
        n x embed_dim embedding on the active tape.
    """
    features = sinusoidal_features(coords, params)
    hidden = relu(elementwise('add', matmul(Tensor(features), params.w_hidden),
                              params.b_hidden))
    return elementwise('add', matmul(hidden, params.w_out), params.b_out)

def zero_embedding(n_points: int, params: PosEncoderParams) -> Tensor:
    """Constant zero block standing in for the embedding in ablation runs."""
    return Tensor(np.zeros((n_points, params.embed_dim)))

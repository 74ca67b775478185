# -*- coding: utf-8 -*-
"""Plot-ready diagnostics: spatial variance grids and scatter pairs."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from ..util.exceptions import ContractError

@dataclass(frozen=True)
class SpatialGrid:
    """Cell means of a value field over the coordinate bounding box.

    Attributes
    ----------
    mean : np.ndarray
        grid_n x grid_n cell means, NaN where a cell holds no point. Row
        index follows the second coordinate, column index the first.
    count : np.ndarray
        Points per cell.
    """
    mean: np.ndarray
    count: np.ndarray

    @property
    def grid_n(self) -> int:
        return int(self.mean.shape[0])

    def variance(self) -> float:
        """Variance of the non missing cell means (smoothing indicator)."""
        filled = self.mean[self.count > 0]
        return float(np.var(filled)) if filled.size else 0.0

    def to_frame(self) -> pd.DataFrame:
        """One row per cell: row, col, value, count (value empty when missing)."""
        rows, cols = np.indices(self.mean.shape)
        return pd.DataFrame({'row': rows.ravel(), 'col': cols.ravel(),
                             'value': self.mean.ravel(), 'count': self.count.ravel()})

def _cell_index(values: np.ndarray, grid_n: int, bounds: Optional[tuple]) -> np.ndarray:
    low, high = bounds if bounds is not None else (values.min(), values.max())
    extent = high - low
    if extent <= 0:
        return np.zeros(values.shape[0], dtype=np.int64)
    cells = np.floor((values - low) / extent * grid_n).astype(np.int64)
    return np.clip(cells, 0, grid_n - 1)

def spatial_variance_grid(coords, values, grid_n: int = 20,
                          bounds: Optional[np.ndarray] = None) -> SpatialGrid:
    """Average a value field on a regular grid.

    Parameters
    ----------
    coords : array_like
        n x 2 coordinates.
    values : array_like
        One value per point.
    grid_n : int
        Cells per side, at least 2.
    bounds : np.ndarray, optional
        2 x 2 array [[min_x, min_y], [max_x, max_y]]; the bounding box of
        coords when omitted. Passing the same bounds makes grids of
        different value fields comparable cell by cell.

    Returns
    -------
    SpatialGrid
        Cell means and counts.
    """
    if grid_n < 2:
        raise ContractError(f'grid_n must be at least 2, got {grid_n}')
    coords = np.asarray(coords, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if coords.shape != (values.shape[0], 2):
        raise ContractError(f'coords shape {coords.shape} does not match {values.shape[0]} values')
    total = np.zeros((grid_n, grid_n))
    count = np.zeros((grid_n, grid_n), dtype=np.int64)
    if values.shape[0]:
        if bounds is None:
            bounds = np.vstack([coords.min(axis=0), coords.max(axis=0)])
        cols = _cell_index(coords[:, 0], grid_n, (bounds[0][0], bounds[1][0]))
        rows = _cell_index(coords[:, 1], grid_n, (bounds[0][1], bounds[1][1]))
        np.add.at(total, (rows, cols), values)
        np.add.at(count, (rows, cols), 1)
    with np.errstate(invalid='ignore', divide='ignore'):
        mean = np.where(count > 0, total / np.maximum(count, 1), np.nan)
    return SpatialGrid(mean, count)

def scatter_pairs(y_true, y_pred) -> pd.DataFrame:
    """True versus predicted pairs for a scatter plot."""
    return pd.DataFrame({'y_true': np.asarray(y_true, dtype=np.float64).reshape(-1),
                         'y_pred': np.asarray(y_pred, dtype=np.float64).reshape(-1)})

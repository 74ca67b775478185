# -*- coding: utf-8 -*-
"""Module responsible for point datasets.

This module is responsible for the folling task:
  - Hold coordinates, features and a positive target in a PointSet.
  - Read and write the CSV layout ``lon,lat,<feature...>,target``.
  - Generate seeded synthetic datasets with a smooth, heavy tailed target.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..util.exceptions import ContractError, DataError
from ..util.functions import get_logger

logger = get_logger(__name__)

COORD_COLUMNS = ('lon', 'lat')
TARGET_COLUMN = 'target'
FLOAT_FORMAT = '%.17g'

@dataclass
class PointSet:
    """Coordinates, features and target of a dataset.

    Attributes
    ----------
    coords : np.ndarray
        n x 2 coordinates (lon, lat).
    features : np.ndarray
        n x F feature matrix.
    target : np.ndarray
        n raw, strictly positive target values.
    names : List[str]
        F feature labels.
    """
    coords: np.ndarray
    features: np.ndarray
    target: np.ndarray
    names: List[str]

    def __post_init__(self) -> None:
        self.coords = np.asarray(self.coords, dtype=np.float64)
        self.features = np.asarray(self.features, dtype=np.float64)
        self.target = np.asarray(self.target, dtype=np.float64).reshape(-1)
        self.names = list(self.names)
        n_points = self.target.shape[0]
        if self.coords.shape != (n_points, 2):
            raise ContractError(f'coords must have shape ({n_points}, 2), got {self.coords.shape}')
        if self.features.ndim != 2 or self.features.shape[0] != n_points:
            raise ContractError(f'features must have {n_points} rows, got {self.features.shape}')
        if self.features.shape[1] != len(self.names):
            raise ContractError(f'{self.features.shape[1]} feature columns but '
                                f'{len(self.names)} names')
        for label, block in (('coordinate', self.coords), ('feature', self.features),
                             ('target', self.target.reshape(-1, 1))):
            finite = np.isfinite(block).all(axis=1)
            if not finite.all():
                raise DataError(f'Non finite {label} at row {int(np.flatnonzero(~finite)[0])}')
        non_positive = np.flatnonzero(self.target <= 0)
        if non_positive.size:
            row = int(non_positive[0])
            raise DataError(f'Target must be strictly positive, row {row} has {self.target[row]}')

    def __len__(self) -> int:
        return int(self.target.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def subset(self, index: Sequence[int]) -> 'PointSet':
        index = np.asarray(index, dtype=np.int64)
        return PointSet(self.coords[index], self.features[index], self.target[index],
                        self.names)

    def to_frame(self) -> pd.DataFrame:
        data = {'lon': self.coords[:, 0], 'lat': self.coords[:, 1]}
        for position, name in enumerate(self.names):
            data[name] = self.features[:, position]
        data[TARGET_COLUMN] = self.target
        return pd.DataFrame(data)

def load_csv(path: str) -> PointSet:
    """Read a dataset in the ``lon,lat,<feature...>,target`` layout.

    Lines starting with # are ignored.

    Parameters
    ----------
    path : str
        CSV file path.

    Returns
    -------
    PointSet
        Parsed dataset, feature names taken from the header.

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    DataError
        On missing columns, non numeric cells (row and column reported) or
        non positive targets.
    """
    try:
        frame = pd.read_csv(path, comment='#', dtype=str, skipinitialspace=True)
    except FileNotFoundError as exception:
        raise FileNotFoundError(f'Dataset file not found: {path}') from exception
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exception:
        raise DataError(f'Cannot parse dataset {path}: {exception}') from exception
    columns = [column.strip() for column in frame.columns]
    frame.columns = columns
    missing = [column for column in (*COORD_COLUMNS, TARGET_COLUMN) if column not in columns]
    if missing:
        raise DataError(f'Dataset {path} is missing column(s): {",".join(missing)}')
    names = [column for column in columns if column not in (*COORD_COLUMNS, TARGET_COLUMN)]
    bad_cells = frame.apply(pd.to_numeric, errors='coerce').isna()
    if bad_cells.values.any():
        row, col = np.argwhere(bad_cells.values)[0]
        raise DataError(f'Non numeric value {frame.iat[row, col]!r} at row {row}, '
                        f'column {columns[col]!r}')
    # Parsed with float() so %.17g text reads back exactly.
    numeric = frame.astype(np.float64)
    non_positive = np.flatnonzero(numeric[TARGET_COLUMN].values <= 0)
    if non_positive.size:
        row = int(non_positive[0])
        raise DataError(f'Non positive target {numeric[TARGET_COLUMN].values[row]} at row {row}')
    return PointSet(numeric[list(COORD_COLUMNS)].values,
                    numeric[names].values.reshape(len(numeric), len(names)),
                    numeric[TARGET_COLUMN].values, names)

def save_csv(points: PointSet, path: str, header: Optional[str] = None) -> None:
    """Write a dataset so that load_csv reads back identical values."""
    with open(path, 'w', encoding='utf8', newline='') as csv_file:
        if header:
            csv_file.write(header + '\n')
        points.to_frame().to_csv(csv_file, index=False, float_format=FLOAT_FORMAT,
                                 lineterminator='\n')

def _smooth_field(rng: np.random.Generator, coords: np.ndarray, n_terms: int = 3) -> np.ndarray:
    """Sum of low frequency sinusoids of the coordinates."""
    field = np.zeros(coords.shape[0])
    for _ in range(n_terms):
        frequency = rng.uniform(0.5, 2.0, size=2)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        amplitude = rng.uniform(0.5, 1.0)
        field += amplitude * np.sin(2.0 * np.pi * coords @ frequency + phase)
    return field

N_SYNTH_FEATURES = 5
MIN_SYNTH_POINTS = 50

def synth_dataset(n: int, seed: int, noise_sd: float = 0.1) -> PointSet:
    """Seeded synthetic stand-in for a soil survey.

    Coordinates are uniform on the unit square. Five spatially smooth
    features are sums of low frequency sinusoids of the coordinates. The
    target is exp(g) times log-normal noise, where g mixes the features with
    a spatial component that the features do not carry, so coordinates hold
    information of their own.

    Parameters
    ----------
    n : int
        Number of points, at least 50.
    seed : int
        Random seed; the dataset is a pure function of (n, seed, noise_sd).
    noise_sd : float
        Standard deviation of the multiplicative noise on the log scale.

    Returns
    -------
    PointSet
        Dataset with features f1..f5 and a strictly positive target.
    """
    if n < MIN_SYNTH_POINTS:
        raise ContractError(f'synth_dataset needs n >= {MIN_SYNTH_POINTS}, got {n}')
    if noise_sd < 0:
        raise ContractError(f'noise_sd must be non negative, got {noise_sd}')
    rng = np.random.default_rng(seed)
    coords = rng.uniform(0.0, 1.0, size=(n, 2))
    features = np.column_stack([_smooth_field(rng, coords)
                                for _ in range(N_SYNTH_FEATURES)])
    loadings = rng.uniform(-0.6, 0.6, size=N_SYNTH_FEATURES)
    interaction = 0.3 * features[:, 0] * features[:, 1]
    spatial = 0.8 * np.sin(3.0 * np.pi * coords[:, 0]) * np.cos(3.0 * np.pi * coords[:, 1])
    log_target = 2.0 + features @ loadings + interaction + spatial
    target = np.exp(log_target + noise_sd * rng.standard_normal(n))
    names = [f'f{position + 1}' for position in range(N_SYNTH_FEATURES)]
    logger.debug('synthetic dataset: n=%d seed=%d noise_sd=%g', n, seed, noise_sd)
    return PointSet(coords, features, target, names)

# -*- coding: utf-8 -*-
"""Preprocessing: log target, feature standardization, coordinate scaling.

Statistics are fitted on the training rows only and stored in a
TransformRecord, which is later applied unchanged to test, evaluation and
inference data and saved inside checkpoints.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..util.exceptions import ContractError
from ..util.functions import get_logger
from .dataset import PointSet

logger = get_logger(__name__)

@dataclass
class PreparedData:
    """Model-ready arrays produced by a TransformRecord.

    Attributes
    ----------
    coords : np.ndarray
        n x 2 min-max scaled coordinates.
    features : np.ndarray
        n x F' standardized features (zero variance columns dropped).
    target_log : np.ndarray
        Natural log of the raw target.
    raw_coords : np.ndarray
        Coordinates as read, kept for reporting.
    """
    coords: np.ndarray
    features: np.ndarray
    target_log: np.ndarray
    raw_coords: np.ndarray

    def __len__(self) -> int:
        return int(self.target_log.shape[0])

    def subset(self, index: Sequence[int]) -> 'PreparedData':
        index = np.asarray(index, dtype=np.int64)
        return PreparedData(self.coords[index], self.features[index],
                            self.target_log[index], self.raw_coords[index])

@dataclass
class TransformRecord:
    """Fitted preprocessing statistics.

    Attributes
    ----------
    feature_names : List[str]
        Names of the kept feature columns, in order.
    feature_mean, feature_std : np.ndarray
        Training statistics of the kept columns.
    coord_min, coord_max : np.ndarray
        Training extents of lon and lat.
    dropped_features : List[str]
        Zero variance columns removed at fit time.
    """
    feature_names: List[str]
    feature_mean: np.ndarray
    feature_std: np.ndarray
    coord_min: np.ndarray
    coord_max: np.ndarray
    dropped_features: List[str] = field(default_factory=list)

    def apply(self, points: PointSet) -> PreparedData:
        """Transform a raw PointSet.

        Raises
        ------
        ContractError
            When given already transformed data or a dataset lacking one of
            the recorded feature columns.
        """
        if isinstance(points, PreparedData):
            raise ContractError('Transform record applied twice: data is already prepared')
        missing = [name for name in self.feature_names if name not in points.names]
        if missing:
            raise ContractError(
                f'Dataset has {points.n_features} feature(s) but the transform expects '
                f'{len(self.feature_names)}; missing: {",".join(missing)}')
        columns = [points.names.index(name) for name in self.feature_names]
        features = (points.features[:, columns] - self.feature_mean) / self.feature_std
        extent = self.coord_max - self.coord_min
        extent = np.where(extent > 0, extent, 1.0)
        coords = (points.coords - self.coord_min) / extent
        return PreparedData(coords, features, np.log(points.target), points.coords.copy())

    @staticmethod
    def invert_target(target_log) -> np.ndarray:
        """Back to the raw target scale."""
        return np.exp(np.asarray(target_log, dtype=np.float64))

    def to_dict(self) -> Dict[str, Any]:
        return {'feature_names': list(self.feature_names),
                'feature_mean': [float(value) for value in self.feature_mean],
                'feature_std': [float(value) for value in self.feature_std],
                'coord_min': [float(value) for value in self.coord_min],
                'coord_max': [float(value) for value in self.coord_max],
                'dropped_features': list(self.dropped_features)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TransformRecord':
        return cls(list(data['feature_names']),
                   np.array(data['feature_mean'], dtype=np.float64),
                   np.array(data['feature_std'], dtype=np.float64),
                   np.array(data['coord_min'], dtype=np.float64),
                   np.array(data['coord_max'], dtype=np.float64),
                   list(data.get('dropped_features') or []))

def fit_transform(points: PointSet,
                  train_index: Optional[Sequence[int]] = None) -> TransformRecord:
    """Fit preprocessing statistics on the training rows.

    Parameters
    ----------
    points : PointSet
        Full dataset.
    train_index : Sequence[int], optional
        Rows to fit on; all rows when omitted.

    Returns
    -------
    TransformRecord
        Fitted statistics; zero variance features are dropped with a warning.
    """
    train = points if train_index is None else points.subset(train_index)
    mean = train.features.mean(axis=0)
    std = train.features.std(axis=0)
    keep = np.ptp(train.features, axis=0) > 0 if len(train) else np.zeros(0, dtype=bool)
    dropped = [name for name, kept in zip(points.names, keep) if not kept]
    if dropped:
        logger.warning('Dropping zero variance feature(s): %s', ', '.join(dropped))
    return TransformRecord([name for name, kept in zip(points.names, keep) if kept],
                           mean[keep], std[keep],
                           train.coords.min(axis=0), train.coords.max(axis=0), dropped)

def preprocess(points: PointSet, train_index: Optional[Sequence[int]] = None):
    """Fit on the training rows and transform the whole dataset.

    Returns
    -------
    Tuple[PreparedData, TransformRecord]
        Prepared arrays for every row and the record used to build them.
    """
    record = fit_transform(points, train_index)
    return record.apply(points), record

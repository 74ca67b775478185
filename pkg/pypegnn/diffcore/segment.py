# -*- coding: utf-8 -*-
"""Segment operations: permutation invariant aggregation over row groups.

Rows of a source tensor are assigned to segments by an index vector, which
is how neighborhoods are aggregated: the segment of an edge row is its
target node.
"""

import numpy as np

from ..util.exceptions import ContractError, DimensionError, SegmentIndexError
from .tensor import Tensor, make_result

SEGMENT_KINDS = ('sum', 'mean', 'max')

def _check_ids(segment_ids, n_rows: int, n_segments: int) -> np.ndarray:
    ids = np.asarray(segment_ids, dtype=np.int64).reshape(-1)
    if ids.shape[0] != n_rows:
        raise DimensionError(
            f'segment_ids has length {ids.shape[0]} but source has {n_rows} rows')
    if n_segments < 0:
        raise ContractError(f'n_segments must be non negative, got {n_segments}')
    if ids.size and (ids.min() < 0 or ids.max() >= n_segments):
        bad = ids[(ids < 0) | (ids >= n_segments)][0]
        raise SegmentIndexError(f'segment id {bad} out of range [0, {n_segments})')
    return ids

def segment_counts(segment_ids, n_segments: int) -> np.ndarray:
    """Number of rows in each segment."""
    return np.bincount(np.asarray(segment_ids, dtype=np.int64), minlength=n_segments)

def segment_reduce(kind: str, source: Tensor, segment_ids, n_segments: int) -> Tensor:
    """Aggregate source rows sharing a segment id.

    Parameters
    ----------
    kind : str
        sum, mean or max.
    source : Tensor
        m x c rows to aggregate.
    segment_ids : array_like
        Length m vector of ids in [0, n_segments).
    n_segments : int
        Number of output rows.

    Returns
    -------
    Tensor
        n_segments x c; empty segments yield zero rows. The max gradient goes
        to the first maximal row of each segment and column.

    Raises
    ------
    SegmentIndexError
        When an id is out of range.
    DimensionError
        When segment_ids and source disagree in length.
    """
    if kind not in SEGMENT_KINDS:
        raise ValueError(f'Unknown segment reduction: {kind}')
    ids = _check_ids(segment_ids, source.rows, n_segments)
    values = source.values
    n_rows, n_cols = values.shape
    if kind in ('sum', 'mean'):
        out = np.zeros((n_segments, n_cols))
        np.add.at(out, ids, values)
        if kind == 'sum':
            def rule(grad):
                return (grad[ids],)
            return make_result(out, (source,), rule)
        counts = segment_counts(ids, n_segments).astype(np.float64)
        divisor = np.maximum(counts, 1.0)[:, None]
        out = out / divisor
        def mean_rule(grad):
            return ((grad / divisor)[ids],)
        return make_result(out, (source,), mean_rule)
    out = np.full((n_segments, n_cols), -np.inf)
    np.maximum.at(out, ids, values)
    empty = segment_counts(ids, n_segments) == 0
    out[empty] = 0.0
    # First row (in source order) attaining the maximum, per segment and column.
    is_max = values == out[ids]
    candidates = np.where(is_max, np.arange(n_rows)[:, None], n_rows)
    argmax = np.full((n_segments, n_cols), n_rows)
    np.minimum.at(argmax, ids, candidates)

    def max_rule(grad):
        source_grad = np.zeros((n_rows, n_cols))
        seg, col = np.nonzero(argmax < n_rows)
        source_grad[argmax[seg, col], col] = grad[seg, col]
        return (source_grad,)

    return make_result(out, (source,), max_rule)

def segment_softmax(scores: Tensor, segment_ids, n_segments: int) -> Tensor:
    """Softmax of a score column within each segment.

    The segment maximum is subtracted before exponentiation, so adding a
    constant to all scores of a segment leaves the result unchanged.

    Parameters
    ----------
    scores : Tensor
        m x 1 column of scores.
    segment_ids : array_like
        Length m segment assignment.
    n_segments : int
        Number of segments.

    Returns
    -------
    Tensor
        m x 1 column whose entries sum to one inside each non empty segment.
    """
    if scores.cols != 1:
        raise DimensionError(f'segment_softmax expects a column vector, got {scores.shape}')
    ids = _check_ids(segment_ids, scores.rows, n_segments)
    values = scores.values
    if values.shape[0] == 0:
        return make_result(np.zeros((0, 1)), (scores,), lambda grad: (np.zeros((0, 1)),))
    seg_max = np.full((n_segments, 1), -np.inf)
    np.maximum.at(seg_max, ids, values)
    exps = np.exp(values - seg_max[ids])
    denom = np.zeros((n_segments, 1))
    np.add.at(denom, ids, exps)
    probs = exps / denom[ids]

    def rule(grad):
        weighted = np.zeros((n_segments, 1))
        np.add.at(weighted, ids, grad * probs)
        return (probs * (grad - weighted[ids]),)

    return make_result(probs, (scores,), rule)

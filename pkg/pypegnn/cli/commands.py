# -*- coding: utf-8 -*-
"""Module implementing the command line commands.

This module is responsible for the folling task:
  - synth: write a seeded synthetic dataset.
  - train: train one model, write its checkpoint, curves and metrics.
  - sweep: train the operator x lambda x seed grid and summarize it.
  - eval: predict with a checkpoint and export plot-ready diagnostics.

Every output file starts with the header line produced by output_header.
"""

import multiprocessing as mp
import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd
import yaml

from ..gnnops import NEIGHBOUR_KINDS
from ..model import (PeGnnModel, TrainingHistory, fit, load_checkpoint, predict,
                     rng_streams, save_checkpoint)
from ..pipeline import (FLOAT_FORMAT, PointSet, PreparedData, SplitIndices, TransformRecord,
                        compute_metrics, load_csv, preprocess, save_csv, scatter_pairs,
                        spatial_variance_grid, split, synth_dataset)
from ..util.exceptions import ContractError, DataError, NumericalError
from ..util.functions import config_hash, get_logger, output_header
from .config import EvalConfig, SweepGrid, SynthConfig, TrainConfig, merge_settings

logger = get_logger(__name__)

SWEEP_KEYS = ('operators', 'lambdas', 'n_seeds')
MODEL_LABELS = {'gcn': 'PE-GCN', 'sage': 'PE-SAGE', 'transformer': 'PE-Transformer',
                'gat': 'PE-GAT'}
METRIC_NAMES = ('mse', 'mae', 'mape')

@dataclass
class TrainingRun:
    """Everything a training run produces."""
    model: PeGnnModel
    record: TransformRecord
    history: TrainingHistory
    data: PreparedData
    splits: SplitIndices
    metrics: Dict[str, float] = field(default_factory=dict)
    predictions: Dict[str, np.ndarray] = field(default_factory=dict)

@contextmanager
def data_phase() -> Iterator[None]:
    """Report broken preconditions met while reading data as data errors."""
    try:
        yield
    except ContractError as exception:
        raise DataError(str(exception)) from exception

def load_points(path: str) -> PointSet:
    if not path:
        raise DataError('No dataset given, use --data')
    with data_phase():
        return load_csv(path)

def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)

def write_frame(frame: pd.DataFrame, path: str, header: str) -> None:
    with open(path, 'w', encoding='utf8', newline='') as csv_file:
        csv_file.write(header + '\n')
        frame.to_csv(csv_file, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')

def write_key_values(values: Dict[str, Any], path: str, header: str) -> None:
    with open(path, 'w', encoding='utf8', newline='') as text_file:
        text_file.write(header + '\n')
        for key, value in values.items():
            text_file.write(f'{key}={_format_value(value)}\n')

def write_yaml(values: Dict[str, Any], path: str, header: str) -> None:
    with open(path, 'w', encoding='utf8', newline='') as yaml_file:
        yaml_file.write(header + '\n')
        yaml.safe_dump(values, yaml_file, sort_keys=False, default_flow_style=False)

def _metric_block(y_hat: np.ndarray, y_log: np.ndarray, y_raw: np.ndarray,
                  prefix: str) -> Dict[str, float]:
    values = {}
    log_metrics = compute_metrics(y_hat, y_log).as_dict()
    raw_metrics = compute_metrics(TransformRecord.invert_target(y_hat), y_raw).as_dict()
    for name in METRIC_NAMES:
        values[f'{prefix}{name}'] = log_metrics[name]
    for name in METRIC_NAMES:
        values[f'{prefix}raw_{name}'] = raw_metrics[name]
    values[f'{prefix}n'] = log_metrics['n']
    return values

def run_training(config: TrainConfig, points: PointSet) -> TrainingRun:
    """Split, preprocess, train and score one configuration.

    Metrics are computed on the log scale (``test_mse`` ...) and, for
    reference, on the raw scale (``test_raw_mse`` ...).
    """
    with data_phase():
        splits = split(len(points), config.split_spec())
        data, record = preprocess(points, splits.train)
        if data.features.shape[1] == 0:
            raise DataError('Every feature has zero variance on the training rows')
    init_rng, _ = rng_streams(config.seed)
    model = PeGnnModel.initialize(config.model_spec(data.features.shape[1]), init_rng)
    history = fit(model, data, splits, config.fit_settings())
    run = TrainingRun(model, record, history, data, splits)
    for part, index in (('test', splits.test), ('eval', splits.eval)):
        y_hat, _ = predict(model, data.subset(index), config.batch_size)
        run.predictions[part] = y_hat
        run.metrics.update(_metric_block(y_hat, data.target_log[index],
                                         points.target[index], f'{part}_'))
    return run

def cmd_synth(settings: Dict[str, Any]) -> int:
    """Write a synthetic dataset and print its summary."""
    config = SynthConfig.from_mapping(settings)
    points = synth_dataset(config.n, config.seed, config.noise_sd)
    path = config.out or os.path.join(config.out_dir, 'synth.csv')
    header = output_header(config_hash(config.protocol_fields()), config.seed)
    save_csv(points, path, header)
    log_target = np.log(points.target)
    print(f'wrote {path}: n={len(points)} F={points.n_features}')
    print(f'target: min={points.target.min():.4g} median={np.median(points.target):.4g} '
          f'max={points.target.max():.4g} log-mean={log_target.mean():.4g} '
          f'log-var={log_target.var():.4g}')
    return 0

def cmd_train(settings: Dict[str, Any]) -> int:
    """Train one model and write checkpoint.yaml, curves.csv and metrics files."""
    config = TrainConfig.from_mapping(settings)
    points = load_points(config.data)
    os.makedirs(config.out_dir, exist_ok=True)
    header = output_header(config.hash(), config.seed)
    run = run_training(config, points)
    save_checkpoint(os.path.join(config.out_dir, 'checkpoint.yaml'), run.model, run.record,
                    config.protocol_fields(), header)
    write_frame(pd.DataFrame(run.history.epochs), os.path.join(config.out_dir, 'curves.csv'),
                header)
    summary = dict(run.metrics)
    summary.update({'best_epoch': run.history.best_epoch,
                    'epochs_run': len(run.history.epochs),
                    'stopped_early': run.history.stopped_early,
                    'moran_fallbacks': run.history.fallbacks.get('constant_batch', 0)})
    write_key_values(summary, os.path.join(config.out_dir, 'metrics.txt'), header)
    write_yaml({'config': config.protocol_fields(), 'metrics': summary},
               os.path.join(config.out_dir, 'metrics.yaml'), header)
    print(f'{MODEL_LABELS[config.operator]} lambda={config.lam}: '
          f'best epoch {run.history.best_epoch} of {len(run.history.epochs)}')
    for part in ('test', 'eval'):
        print(f'{part}: mse={summary[part + "_mse"]:.5f} mae={summary[part + "_mae"]:.5f} '
              f'mape={summary[part + "_mape"]:.5f} (log scale)')
    return 0

def run_sweep_cell(values: Dict[str, Any], points: PointSet, grid_n: int) -> Dict[str, Any]:
    """Train one sweep cell; failures are recorded, not raised."""
    config = TrainConfig.from_mapping(values)
    row: Dict[str, Any] = {'operator': config.operator, 'lambda': config.lam,
                           'seed': config.seed, 'status': 'ok', 'error': ''}
    try:
        run = run_training(config, points)
    except (ArithmeticError, ValueError, IndexError) as exception:
        logger.warning('Sweep cell %s lambda=%s seed=%d failed: %s', config.operator,
                       config.lam, config.seed, exception)
        row.update({'status': 'failed', 'error': f'{type(exception).__name__}: {exception}'})
        return row
    row.update(run.metrics)
    index = run.splits.eval
    coords = run.data.raw_coords[index]
    bounds = np.vstack([coords.min(axis=0), coords.max(axis=0)])
    truth = spatial_variance_grid(coords, run.data.target_log[index], grid_n, bounds)
    pred = spatial_variance_grid(coords, run.predictions['eval'], grid_n, bounds)
    row.update({'grid_var_true': truth.variance(), 'grid_var_pred': pred.variance()})
    return row

def _run_cells(cell_values: List[Dict[str, Any]], points: PointSet, grid_n: int,
               workers: int) -> List[Dict[str, Any]]:
    if workers <= 1:
        return [run_sweep_cell(values, points, grid_n) for values in cell_values]
    workers_num = workers if workers <= mp.cpu_count() else mp.cpu_count()
    with mp.Pool(workers_num) as worker_pool:
        return worker_pool.starmap(run_sweep_cell,
                                   [(values, points, grid_n) for values in cell_values])

def summarize_cells(rows: List[Dict[str, Any]], cells: List[Tuple[str, float, int]]
                   ) -> pd.DataFrame:
    """Mean and population standard deviation of the test metrics per (operator, lambda)."""
    by_key = {(row['operator'], row['lambda'], row['seed']): row for row in rows}
    table = []
    for operator, lam in dict.fromkeys((operator, lam) for operator, lam, _ in cells):
        group = [by_key[cell] for cell in cells if cell[:2] == (operator, lam)]
        done = [row for row in group if row['status'] == 'ok']
        entry: Dict[str, Any] = {'model': MODEL_LABELS[operator], 'operator': operator,
                                 'lambda': lam}
        for name in METRIC_NAMES:
            values = np.array([row[f'test_{name}'] for row in done])
            entry[f'{name}_mean'] = float(values.mean()) if done else np.nan
            entry[f'{name}_std'] = float(values.std()) if done else np.nan
        entry.update({'n_seeds': len(done), 'n_failed': len(group) - len(done)})
        table.append(entry)
    return pd.DataFrame(table)

def format_summary(summary: pd.DataFrame) -> str:
    """Fixed width text rendering of the sweep table."""
    lines = [f'{"Model":<16}{"lambda":>8}  {"MSE":>21}  {"MAE":>21}  {"MAPE":>21}']
    for entry in summary.to_dict('records'):
        cells = [f'{entry[name + "_mean"]:.4f} ± {entry[name + "_std"]:.4f}'
                 for name in METRIC_NAMES]
        failed = f'  ({entry["n_failed"]} failed)' if entry['n_failed'] else ''
        lines.append(f'{entry["model"]:<16}{entry["lambda"]:>8}  '
                     + '  '.join(f'{cell:>21}' for cell in cells) + failed)
    return '\n'.join(lines) + '\n'

def cmd_sweep(settings: Dict[str, Any]) -> int:
    """Run the sweep grid; writes cells.csv, summary.csv, summary.txt and smoothing.csv."""
    settings = dict(settings)
    grid = SweepGrid.from_mapping({key: settings.pop(key) for key in SWEEP_KEYS
                                   if key in settings})
    base = TrainConfig.from_mapping(settings)
    points = load_points(base.data)
    os.makedirs(base.out_dir, exist_ok=True)
    header = output_header(config_hash({**base.protocol_fields(), **asdict(grid)}), base.seed)
    cells = grid.cells(base.seed)
    cell_values = [{**asdict(base), 'operator': operator, 'lam': lam, 'seed': seed}
                   for operator, lam, seed in cells]
    logger.info('Running %d sweep cell(s) with %d worker(s)', len(cells), base.workers)
    rows = _run_cells(cell_values, points, base.grid_n, base.workers)
    frame = pd.DataFrame(rows)
    write_frame(frame, os.path.join(base.out_dir, 'cells.csv'), header)
    summary = summarize_cells(rows, cells)
    write_frame(summary, os.path.join(base.out_dir, 'summary.csv'), header)
    text = format_summary(summary)
    with open(os.path.join(base.out_dir, 'summary.txt'), 'w', encoding='utf8',
              newline='') as text_file:
        text_file.write(header + '\n' + text)
    done = frame[frame['status'] == 'ok']
    if not done.empty:
        smoothing = done[['operator', 'lambda', 'seed', 'grid_var_true', 'grid_var_pred']].copy()
        smoothing['ratio'] = smoothing['grid_var_pred'] / smoothing['grid_var_true']
        write_frame(smoothing, os.path.join(base.out_dir, 'smoothing.csv'), header)
    print(text, end='')
    if done.empty:
        raise NumericalError(f'All {len(cells)} sweep cell(s) failed')
    return 0

def cmd_eval(settings: Dict[str, Any]) -> int:
    """Predict with a checkpoint and export predictions, grids and scatter pairs."""
    config = EvalConfig.from_mapping(settings)
    with data_phase():
        model, record, echo = load_checkpoint(config.checkpoint)
    points = load_points(config.data)
    if len(points) < 2 and model.spec.operator in NEIGHBOUR_KINDS:
        raise DataError(f'{model.spec.operator} needs at least 2 points to predict, '
                        f'got {len(points)}')
    with data_phase():
        data = record.apply(points)
    os.makedirs(config.out_dir, exist_ok=True)
    header = output_header(config_hash(echo), echo.get('seed', 0))
    y_hat, i_hat = predict(model, data, config.batch_size)
    coords = data.raw_coords
    frames = {
        'predictions_log.csv': pd.DataFrame({'lon': coords[:, 0], 'lat': coords[:, 1],
                                             'y_true': data.target_log, 'y_pred': y_hat,
                                             'moran_pred': i_hat}),
        'predictions_raw.csv': pd.DataFrame({'lon': coords[:, 0], 'lat': coords[:, 1],
                                             'y_true': points.target,
                                             'y_pred': record.invert_target(y_hat),
                                             'moran_pred': i_hat}),
        'grid_truth.csv': spatial_variance_grid(coords, data.target_log,
                                                config.grid_n).to_frame(),
        'grid_pred.csv': spatial_variance_grid(coords, y_hat, config.grid_n).to_frame(),
        'scatter.csv': scatter_pairs(data.target_log, y_hat),
    }
    for name, frame in frames.items():
        write_frame(frame, os.path.join(config.out_dir, name), header)
    metrics = _metric_block(y_hat, data.target_log, points.target, '')
    write_key_values(metrics, os.path.join(config.out_dir, 'eval_metrics.txt'), header)
    print(f'n={metrics["n"]} mse={metrics["mse"]:.5f} mae={metrics["mae"]:.5f} '
          f'mape={metrics["mape"]:.5f} (log scale)')
    print(f'raw scale: mse={metrics["raw_mse"]:.5g} mae={metrics["raw_mae"]:.5g} '
          f'mape={metrics["raw_mape"]:.5f}')
    return 0

COMMANDS = {'synth': cmd_synth, 'train': cmd_train, 'sweep': cmd_sweep, 'eval': cmd_eval}

def run_command(name: str, config_file: Optional[str], flags: Dict[str, Any]) -> int:
    """Merge configuration file and flags, then run a command."""
    return COMMANDS[name](merge_settings(config_file, flags))

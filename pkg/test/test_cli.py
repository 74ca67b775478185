# -*- coding: utf-8 -*-
"""Module use for testing the command line.

    Classes
    -------
    TestSynthCommand
        Synthetic dataset command.
    TestTrainCommand
        Training runs, configuration files and validation errors.
    TestSweepCommand
        Sweep table and its consistency with single runs.
    TestEvalCommand
        Predictions and diagnostics exported from a checkpoint.
"""
import contextlib
import io
import os
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd
import yaml

from .context import cli
from . import test_dir

SMALL_MODEL = ['--k', '3', '--embed-dim', '4', '--hidden-dim', '4', '--n-scales', '2',
               '--epochs', '2', '--batch-size', '64', '--patience', '2']

def run_cli(*argv):
    """Run the command line, returning the exit code and what it printed."""
    output = io.StringIO()
    with contextlib.redirect_stdout(output):
        code = cli.main([str(arg) for arg in argv])
    return code, output.getvalue()

def read_bytes(path):
    with open(path, 'rb') as binary_file:
        return binary_file.read()

def read_frame(path):
    return pd.read_csv(path, comment='#', keep_default_na=False, na_values=[''])

class CliTestCase(unittest.TestCase):
    """Shared synthetic dataset written once per test class."""

    @classmethod
    def setUpClass(cls):
        cls.directory = tempfile.mkdtemp()
        cls.data = os.path.join(cls.directory, 'synth.csv')
        code, _ = run_cli('synth', '--n', 120, '--seed', 3, '--out', cls.data)
        assert code == 0

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.directory)

    def out_dir(self, name):
        return os.path.join(self.directory, name)

    def train(self, name, *extra):
        return run_cli('train', '--data', self.data, '--out-dir', self.out_dir(name),
                       *SMALL_MODEL, *extra)

class TestSynthCommand(CliTestCase):
    """synth writes a deterministic dataset."""

    def test_rerun_is_byte_identical(self):
        first, second = self.out_dir('synth_a.csv'), self.out_dir('synth_b.csv')
        for path in (first, second):
            code, printed = run_cli('synth', '--n', 200, '--seed', 7, '--out', path)
            self.assertEqual(code, 0)
        self.assertEqual(read_bytes(first), read_bytes(second))
        self.assertIn('n=200 F=5', printed)

    def test_file_layout(self):
        with open(self.data, encoding='utf8') as csv_file:
            header = csv_file.readline()
        self.assertRegex(header, r'^# pypegnn \S+ config=[0-9a-f]{12} seed=3$')
        frame = read_frame(self.data)
        self.assertEqual(list(frame.columns), ['lon', 'lat', 'f1', 'f2', 'f3', 'f4', 'f5',
                                               'target'])
        self.assertEqual(len(frame), 120)

    def test_default_output_path(self):
        out_dir = self.out_dir('synth_default')
        os.makedirs(out_dir)
        code, _ = run_cli('synth', '--n', 60, '--out-dir', out_dir)
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(os.path.join(out_dir, 'synth.csv')))

    def test_below_minimum_size(self):
        code, _ = run_cli('synth', '--n', 10, '--out', self.out_dir('tiny.csv'))
        self.assertEqual(code, 2)
        self.assertFalse(os.path.exists(self.out_dir('tiny.csv')))

class TestTrainCommand(CliTestCase):
    """train writes checkpoint, curves and metrics."""

    def test_outputs(self):
        code, printed = self.train('train_outputs', '--operator', 'sage', '--lambda', 0.5)
        self.assertEqual(code, 0)
        self.assertIn('PE-SAGE lambda=0.5', printed)
        out_dir = self.out_dir('train_outputs')
        for name in ('checkpoint.yaml', 'curves.csv', 'metrics.txt', 'metrics.yaml'):
            self.assertTrue(os.path.exists(os.path.join(out_dir, name)), msg=name)
        curves = read_frame(os.path.join(out_dir, 'curves.csv'))
        self.assertEqual(list(curves.columns), ['epoch', 'train_loss', 'test_mse', 'test_mae',
                                                'test_mape', 'eval_mae'])
        self.assertEqual(list(curves['epoch']), [1, 2])
        with open(os.path.join(out_dir, 'metrics.yaml'), encoding='utf8') as yaml_file:
            summary = yaml.safe_load(yaml_file)
        self.assertEqual(summary['config']['operator'], 'sage')
        self.assertNotIn('data', summary['config'])
        self.assertEqual(summary['metrics']['eval_n'], 18)

    def test_rerun_is_identical(self):
        for name in ('train_rerun_a', 'train_rerun_b'):
            code, _ = self.train(name, '--operator', 'gat', '--seed', 4)
            self.assertEqual(code, 0)
        for name in ('checkpoint.yaml', 'curves.csv', 'metrics.txt', 'metrics.yaml'):
            self.assertEqual(read_bytes(os.path.join(self.out_dir('train_rerun_a'), name)),
                             read_bytes(os.path.join(self.out_dir('train_rerun_b'), name)),
                             msg=name)

    def test_invalid_lambda(self):
        code, _ = self.train('train_bad_lambda', '--lambda', 1.5)
        self.assertEqual(code, 2)

    def test_flags_override_config_file(self):
        config = os.path.join(test_dir, 'train_config.yaml')
        code, _ = run_cli('train', '--config', config, '--data', self.data, '--out-dir',
                          self.out_dir('train_config'), '--operator', 'transformer',
                          '--epochs', 2)
        self.assertEqual(code, 0)
        with open(os.path.join(self.out_dir('train_config'), 'metrics.yaml'),
                  encoding='utf8') as yaml_file:
            echo = yaml.safe_load(yaml_file)['config']
        self.assertEqual(echo['operator'], 'transformer')
        self.assertEqual(echo['epochs'], 2)
        self.assertEqual(echo['lam'], 0.25)
        self.assertEqual(echo['k'], 4)

    def test_unknown_config_key(self):
        config = os.path.join(self.directory, 'unknown.cfg')
        with open(config, 'w', encoding='utf8') as config_file:
            config_file.write('operator=gcn\nlearning_rate=0.1\n')
        code, _ = run_cli('train', '--config', config, '--data', self.data)
        self.assertEqual(code, 2)

    def test_missing_dataset(self):
        code, _ = run_cli('train', '--data', os.path.join(self.directory, 'absent.csv'),
                          '--out-dir', self.out_dir('train_absent'), *SMALL_MODEL)
        self.assertEqual(code, 3)

    def test_malformed_dataset(self):
        path = os.path.join(self.directory, 'broken.csv')
        with open(path, 'w', encoding='utf8') as csv_file:
            csv_file.write('lon,lat,f1,target\n0.1,0.2,abc,1.0\n0.3,0.4,1.0,2.0\n')
        code, _ = run_cli('train', '--data', path, '--out-dir', self.out_dir('train_broken'),
                          *SMALL_MODEL)
        self.assertEqual(code, 3)

    def test_split_part_too_small(self):
        path = os.path.join(self.directory, 'seven.csv')
        read_frame(self.data).head(7).to_csv(path, index=False)
        code, _ = run_cli('train', '--data', path, '--out-dir', self.out_dir('train_seven'),
                          *SMALL_MODEL, '--operator', 'gcn')
        self.assertEqual(code, 3)

    def test_bad_flag_type(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as context:
                run_cli('train', '--k', 'three')
        self.assertEqual(context.exception.code, 2)

class TestSweepCommand(CliTestCase):
    """sweep aggregates cells into the summary table."""

    def test_single_cell_matches_train(self):
        code, _ = self.train('sweep_reference', '--operator', 'gcn', '--lambda', 0.75,
                             '--seed', 2)
        self.assertEqual(code, 0)
        code, printed = run_cli('sweep', '--data', self.data, '--out-dir',
                                self.out_dir('sweep_single'), *SMALL_MODEL, '--seed', 2,
                                '--operators', 'gcn', '--lambdas', 0.75, '--n-seeds', 1)
        self.assertEqual(code, 0)
        self.assertIn('PE-GCN', printed)
        with open(os.path.join(self.out_dir('sweep_reference'), 'metrics.yaml'),
                  encoding='utf8') as yaml_file:
            metrics = yaml.safe_load(yaml_file)['metrics']
        summary = read_frame(os.path.join(self.out_dir('sweep_single'), 'summary.csv'))
        self.assertEqual(len(summary), 1)
        for name in ('mse', 'mae', 'mape'):
            np.testing.assert_allclose(summary[f'{name}_mean'][0], metrics[f'test_{name}'],
                                       rtol=1e-12)
            self.assertEqual(summary[f'{name}_std'][0], 0.0)

    def test_grid_shape(self):
        code, _ = run_cli('sweep', '--data', self.data, '--out-dir',
                          self.out_dir('sweep_grid'), *SMALL_MODEL, '--epochs', 1,
                          '--operators', 'sage,gat', '--lambdas', '0.25,0.5',
                          '--n-seeds', 2, '--workers', 2)
        self.assertEqual(code, 0)
        out_dir = self.out_dir('sweep_grid')
        cells = read_frame(os.path.join(out_dir, 'cells.csv'))
        self.assertEqual(len(cells), 8)
        self.assertTrue((cells['status'] == 'ok').all())
        summary = read_frame(os.path.join(out_dir, 'summary.csv'))
        self.assertEqual(list(summary['model']), ['PE-SAGE', 'PE-SAGE', 'PE-GAT', 'PE-GAT'])
        self.assertEqual(list(summary['n_seeds']), [2, 2, 2, 2])
        smoothing = read_frame(os.path.join(out_dir, 'smoothing.csv'))
        np.testing.assert_allclose(smoothing['ratio'],
                                   smoothing['grid_var_pred'] / smoothing['grid_var_true'])
        with open(os.path.join(out_dir, 'summary.txt'), encoding='utf8') as text_file:
            lines = text_file.read().splitlines()
        self.assertEqual(len(lines), 6)
        self.assertIn('±', lines[2])

    def test_invalid_grid(self):
        code, _ = run_cli('sweep', '--data', self.data, '--operators', 'sage,cheb')
        self.assertEqual(code, 2)

class TestEvalCommand(CliTestCase):
    """eval exports predictions on both scales and the diagnostics."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        code, _ = run_cli('train', '--data', cls.data, '--out-dir',
                          os.path.join(cls.directory, 'trained'), *SMALL_MODEL, '--seed', 5)
        assert code == 0
        cls.checkpoint = os.path.join(cls.directory, 'trained', 'checkpoint.yaml')

    def evaluate(self, name, data, *extra):
        return run_cli('eval', '--checkpoint', self.checkpoint, '--data', data,
                       '--out-dir', self.out_dir(name), *extra)

    def test_outputs(self):
        code, printed = self.evaluate('eval_outputs', self.data, '--grid-n', 5)
        self.assertEqual(code, 0)
        self.assertIn('n=120', printed)
        out_dir = self.out_dir('eval_outputs')
        grid = read_frame(os.path.join(out_dir, 'grid_pred.csv'))
        self.assertEqual(len(grid), 25)
        self.assertEqual(len(read_frame(os.path.join(out_dir, 'grid_truth.csv'))), 25)
        log_scale = read_frame(os.path.join(out_dir, 'predictions_log.csv'))
        raw_scale = read_frame(os.path.join(out_dir, 'predictions_raw.csv'))
        self.assertEqual(list(log_scale.columns), ['lon', 'lat', 'y_true', 'y_pred',
                                                   'moran_pred'])
        np.testing.assert_allclose(np.exp(log_scale['y_pred']), raw_scale['y_pred'],
                                   rtol=1e-10)
        scatter = read_frame(os.path.join(out_dir, 'scatter.csv'))
        self.assertEqual(len(scatter), 120)
        with open(os.path.join(out_dir, 'eval_metrics.txt'), encoding='utf8') as text_file:
            header = text_file.readline()
        self.assertTrue(header.rstrip().endswith('seed=5'))

    def test_rerun_is_byte_identical(self):
        for name in ('eval_rerun_a', 'eval_rerun_b'):
            self.assertEqual(self.evaluate(name, self.data)[0], 0)
        for name in ('predictions_log.csv', 'grid_pred.csv', 'eval_metrics.txt'):
            self.assertEqual(read_bytes(os.path.join(self.out_dir('eval_rerun_a'), name)),
                             read_bytes(os.path.join(self.out_dir('eval_rerun_b'), name)))

    def test_feature_mismatch(self):
        frame = read_frame(self.data).drop(columns=['f5'])
        path = os.path.join(self.directory, 'four_features.csv')
        frame.to_csv(path, index=False)
        code, _ = self.evaluate('eval_mismatch', path)
        self.assertEqual(code, 3)

    def test_single_row_dataset(self):
        path = os.path.join(self.directory, 'one_row.csv')
        read_frame(self.data).head(1).to_csv(path, index=False)
        code, _ = self.evaluate('eval_one_row', path)
        self.assertEqual(code, 3)

    def test_missing_checkpoint(self):
        code, _ = run_cli('eval', '--data', self.data)
        self.assertEqual(code, 2)

if __name__ == '__main__':
    unittest.main()

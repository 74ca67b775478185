# -*- coding: utf-8 -*-
"""End-to-end checks on the synthetic survey.

They train full size models for up to 200 epochs, so they only run when
PYPEGNN_ACCEPTANCE=1 (see run_test.sh).
"""
import contextlib
import io
import os
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd

from .context import cli
from .context import pipeline
from . import acceptance_enabled

@unittest.skipUnless(acceptance_enabled, 'set PYPEGNN_ACCEPTANCE=1 to run')
class TestSyntheticSurvey(unittest.TestCase):
    """PE-SAGE quality, encoder ablation and the full sweep table."""

    @classmethod
    def setUpClass(cls):
        cls.points = pipeline.synth_dataset(2000, 7)
        cls.directory = tempfile.mkdtemp()
        cls.data = os.path.join(cls.directory, 'synth.csv')
        pipeline.save_csv(cls.points, cls.data)

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.directory)

    def eval_mse(self, **values):
        config = cli.TrainConfig.from_mapping({'operator': 'sage', 'lam': 0.5, **values})
        return cli.run_training(config, self.points).metrics['eval_mse']

    def test_beats_mean_predictor(self):
        log_target = np.log(self.points.target)
        self.assertLess(self.eval_mse(seed=0), 0.5 * log_target.var())

    def test_positional_encoder_helps(self):
        for seed in range(3):
            with_encoder = self.eval_mse(seed=seed)
            without_encoder = self.eval_mse(seed=seed, use_posenc=False)
            self.assertGreater(without_encoder, with_encoder, msg=f'seed {seed}')

    def test_sweep_table(self):
        out_dir = os.path.join(self.directory, 'sweep')
        with contextlib.redirect_stdout(io.StringIO()):
            code = cli.main(['sweep', '--data', self.data, '--out-dir', out_dir,
                             '--n-seeds', '3', '--workers', str(os.cpu_count() or 1)])
        self.assertEqual(code, 0)
        summary = pd.read_csv(os.path.join(out_dir, 'summary.csv'), comment='#')
        self.assertEqual(len(summary), 12)
        self.assertEqual(list(summary.columns)[:3], ['model', 'operator', 'lambda'])
        for name in ('mse', 'mae', 'mape'):
            self.assertIn(f'{name}_mean', summary.columns)
            self.assertIn(f'{name}_std', summary.columns)
        self.assertTrue((summary['n_seeds'] == 3).all())
        smoothing = pd.read_csv(os.path.join(out_dir, 'smoothing.csv'), comment='#')
        self.assertEqual(sorted(set(smoothing['operator'])),
                         ['gat', 'gcn', 'sage', 'transformer'])

if __name__ == '__main__':
    unittest.main()

# -*- coding: utf-8 -*-
"""Module use to test the utility functions"""

import logging
import re
import time
import unittest
from .context import util

class TestUtilFunctions(unittest.TestCase):
    """Test the util functions.

        Methods
        -------
        test_get_logger()
            Test the logger factory.
        test_timing()
            Test the timing decorator.
        test_config_hash()
            Test the configuration digest.
        test_output_header()
            Test the header line of output files.
    """

    def test_get_logger(self):
        """Test that the logger carries the requested name and level."""
        logger = util.get_logger('pypegnn.test', logging.DEBUG)
        self.assertEqual(logger.name, 'pypegnn.test')
        self.assertEqual(logger.level, logging.DEBUG)

    def test_timing(self):
        """Test that the decorator returns the result and the elapsed time."""
        @util.timing
        def slow_sum(first, second):
            time.sleep(0.01)
            return first + second
        result, elapsed = slow_sum(2, 3)
        self.assertEqual(result, 5)
        self.assertGreaterEqual(elapsed, 0.0)
        self.assertEqual(slow_sum.__name__, 'slow_sum')

    def test_config_hash(self):
        """Test that the digest ignores key order and sees value changes."""
        first = util.config_hash({'operator': 'sage', 'lam': 0.5})
        second = util.config_hash({'lam': 0.5, 'operator': 'sage'})
        third = util.config_hash({'lam': 0.25, 'operator': 'sage'})
        self.assertEqual(first, second)
        self.assertNotEqual(first, third)
        self.assertRegex(first, r'^[0-9a-f]{12}$')

    def test_output_header(self):
        """Test the header comment line."""
        header = util.output_header('0123456789ab', 7)
        self.assertIsNotNone(re.fullmatch(
            r'# pypegnn \S+ config=0123456789ab seed=7', header))

    def test_exception_hierarchy(self):
        """Custom errors remain catchable as builtin exceptions."""
        self.assertTrue(issubclass(util.ConfigError, ValueError))
        self.assertTrue(issubclass(util.SegmentIndexError, IndexError))
        self.assertTrue(issubclass(util.NumericalError, ArithmeticError))

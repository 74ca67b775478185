# -*- coding: utf-8 -*-
"""Exceptions raised by the package.

All of them derive from builtin exceptions so callers that only know about
ValueError, IndexError or ArithmeticError keep working.
"""

class DimensionError(ValueError):
    """Operand shapes are incompatible."""

class DomainError(ValueError):
    """An argument lies outside the domain of a function."""

class SegmentIndexError(IndexError):
    """A segment id is outside [0, n_segments)."""

class ContractError(ValueError):
    """A precondition of an operation does not hold."""

class DataError(ValueError):
    """An input dataset is malformed."""

class ConfigError(ValueError):
    """A configuration value is invalid."""

class NumericalError(ArithmeticError):
    """A computation produced non-finite values."""

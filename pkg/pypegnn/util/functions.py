# -*- coding: utf-8 -*-
"""Module containing utility functions used by other modules in the package."""

import functools
import hashlib
import logging
import time
from typing import Tuple, Any, Callable, Dict

import yaml

def get_logger(logger_name : str, logger_level: int = logging.NOTSET) -> logging.Logger:
    """Get a logger with a specific name and level

    Parameters
    ----------
    logger_name : str
        String use to name the logger.
    logger_level : int
        Level to use for logging.
        The options are logging.[NOTSET, DEBUG, INFO, WARNING, ERROR, CRITICAL].
        NOTSET defers to the level configured by the command line.

    Returns
    -------
    Logger
        Logger instance to use.
    """
    logger = logging.getLogger(logger_name)
    logger.setLevel(logger_level)
    return logger

def timing(function : Callable) -> Callable[..., Tuple[Any, float]]:
    """Times annotated functions

    Parameters
    ----------
    function : Callable
        Function or method to time.

    Returns
    -------
    Callable
        Wrapped function returning a tuple containing the result of the
        function and its execution time in seconds.
    """
    @functools.wraps(function)
    def wrap(*args, **kwargs) -> Tuple[Any, float]:
        start = time.perf_counter()
        result = function(*args, **kwargs)
        elapsed_time = time.perf_counter() - start
        return result, elapsed_time
    return wrap

def config_hash(fields: Dict[str, Any]) -> str:
    """Short digest identifying a configuration.

    Parameters
    ----------
    fields : Dict[str, Any]
        Configuration values. Only YAML serializable scalars are expected.

    Returns
    -------
    str
        First 12 hexadecimal characters of the SHA-256 digest of the
        canonical (key sorted) YAML dump of the fields.
    """
    canonical = yaml.safe_dump(fields, sort_keys=True, default_flow_style=False)
    return hashlib.sha256(canonical.encode('utf8')).hexdigest()[:12]

def output_header(digest: str, seed: int) -> str:
    """Header comment line written at the top of every output file.

    Parameters
    ----------
    digest : str
        Configuration hash as returned by config_hash.
    seed : int
        Random seed of the run.

    Returns
    -------
    str
        Comment line (without trailing new line).
    """
    # pylint: disable=import-outside-toplevel
    from .. import __version__
    return f'# pypegnn {__version__} config={digest} seed={seed}'

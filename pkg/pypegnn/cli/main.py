# -*- coding: utf-8 -*-
"""Command line entry point: ``pypegnn {synth,train,sweep,eval}``.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 numerical failure.
"""

import argparse
import logging
import sys
from dataclasses import fields
from typing import List, Optional

import yaml

from ..util.exceptions import (ConfigError, ContractError, DataError, DimensionError,
                               DomainError, NumericalError, SegmentIndexError)
from ..util.functions import get_logger
from .commands import run_command
from .config import EvalConfig, SweepGrid, SynthConfig, TrainConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

logger = get_logger(__name__)

def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ('true', 'yes', '1'):
        return True
    if lowered in ('false', 'no', '0'):
        return False
    raise argparse.ArgumentTypeError(f'expected true or false, got {text!r}')

def _add_config_flags(parser: argparse.ArgumentParser, cls: type) -> List[str]:
    """One flag per dataclass field; returns the destination names."""
    names = []
    for item in fields(cls):
        flag = '--' + item.metadata.get('flag', item.name.replace('_', '-'))
        kind = _parse_bool if item.type is bool else item.type
        parser.add_argument(flag, dest=item.name, type=kind, default=None,
                            help=f'default: {item.default}')
        names.append(item.name)
    return names

def build_parser() -> argparse.ArgumentParser:
    """Parser with the synth, train, sweep and eval sub commands."""
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('--config', default=None,
                        help='YAML (.yaml/.yml) or key=value configuration file; flags win')
    shared.add_argument('--verbose', action='store_true', help='log at DEBUG level')
    parser = argparse.ArgumentParser(
        prog='pypegnn', description='Positional encoder graph neural networks for '
                                    'geographic point regression.')
    commands = parser.add_subparsers(dest='command', required=True)
    synth = commands.add_parser('synth', parents=[shared], help='write a synthetic dataset')
    synth.set_defaults(flag_names=_add_config_flags(synth, SynthConfig))
    train = commands.add_parser('train', parents=[shared], help='train one model')
    train.set_defaults(flag_names=_add_config_flags(train, TrainConfig))
    sweep = commands.add_parser('sweep', parents=[shared],
                                help='train the operator x lambda x seed grid')
    sweep.set_defaults(flag_names=_add_config_flags(sweep, TrainConfig)
                       + _add_config_flags(sweep, SweepGrid))
    evaluate = commands.add_parser('eval', parents=[shared],
                                   help='predict with a checkpoint, export diagnostics')
    evaluate.set_defaults(flag_names=_add_config_flags(evaluate, EvalConfig))
    return parser

def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    flags = {name: getattr(args, name) for name in args.flag_names}
    try:
        return run_command(args.command, args.config, flags)
    except ConfigError as exception:
        logger.error('%s', exception)
        return EXIT_USAGE
    except DataError as exception:
        logger.error('Data error: %s', exception)
        return EXIT_DATA
    except (NumericalError, DimensionError, DomainError, SegmentIndexError,
            ContractError, ArithmeticError) as exception:
        logger.error('Numerical failure: %s', exception)
        return EXIT_NUMERICAL
    except (OSError, yaml.YAMLError, ValueError) as exception:
        logger.error('Input error: %s', exception)
        return EXIT_DATA

def run() -> None:
    sys.exit(main())

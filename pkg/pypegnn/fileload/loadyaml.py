# -*- coding: utf-8 -*-
"""Module use for parsing configuration and checkpoint files.

This module parses and return a provided file after verifying
that it complies with all the characteristics provided below.
Otherwise it will raise a proper exception.
 - The path provided exist and is readable by the user.
 - The file is properly formatted (YAML or flat key=value lines).
 - The file contains the expected keys.
"""

import os
from typing import List, Dict, Any, Optional
import yaml
from yaml.parser import ParserError
from yaml.scanner import ScannerError
from ..util.exceptions import ConfigError
from .helpers import lower_dict_keys
from .helpers import check_required_keys
from .helpers import parse_key_value_lines

_YAML_SUFFIXES = ('.yaml', '.yml')

def _check_keys(configuration_object: Dict[str, Any],
                required_keys: Optional[List[str]]) -> None:
    if required_keys:
        missing_keys = check_required_keys(required_keys, configuration_object.keys())
        if len(missing_keys) > 0:
            raise ValueError(
                'Missing the following configuration key(s): ' + ','.join(missing_keys))

def load_yaml_file(yaml_file: str,
                   required_keys: Optional[List[str]] = None
                  ) -> Dict[str, Any]:
    """Load a YAML mapping.

    Parse and return the YAML file if the file is readable and
    formatted propertly. Otherwise it raised exceptions.

    Parameters
    ----------
    yaml_file: str
        Full path of the YAML file.
    required_keys : List[str], optional
        List of the required top level keys.

    Returns
    -------
    Dict[str, Any]
        Python dictionary containing the YAML file data, top level keys
        in lower case.

    Raises
    ------
    ValueError
        If the file is missing the required keys or is not a mapping.
    FileNotFoundError
        If the YAML file does not exists.
    ParserError
        If the YAML file is not formated correctly.
    """
    error_messages = {
        'FileNotFoundError': 'YAML file not found: ',
        'ParserError': 'Wrong YAML file format: ',
        'ScannerError': 'Wrong YAML file format: ',
    }
    try:
        with open(yaml_file, encoding='utf8') as config_file:
            content = yaml.load(config_file, yaml.SafeLoader)
    except FileNotFoundError as exception:
        error_msg = error_messages[exception.__class__.__name__] + str(exception)
        raise FileNotFoundError(error_msg) from exception
    except (ParserError, ScannerError) as exception:
        error_msg = error_messages[exception.__class__.__name__] + str(exception)
        raise ParserError(error_msg) from exception
    if not isinstance(content, dict):
        raise ValueError(f'YAML file does not contain a mapping: {yaml_file}')
    configuration_object = lower_dict_keys(content)
    _check_keys(configuration_object, required_keys)
    return configuration_object

def load_config_file(config_file: str,
                     required_keys: Optional[List[str]] = None
                    ) -> Dict[str, Any]:
    """Load a flat configuration file.

    Files ending in .yaml or .yml are parsed as YAML mappings, any other
    file as key=value lines.

    Parameters
    ----------
    config_file : str
        Path of the configuration file.
    required_keys : List[str], optional
        Keys that must be present.

    Returns
    -------
    Dict[str, Any]
        Configuration values keyed by lower case names.

    Raises
    ------
    ConfigError
        When the file cannot be read or parsed, misses required keys or
        holds nested values.
    """
    try:
        if config_file.lower().endswith(_YAML_SUFFIXES):
            configuration_object = load_yaml_file(config_file)
        else:
            if not os.path.exists(config_file):
                raise FileNotFoundError(f'Configuration file not found: {config_file}')
            with open(config_file, encoding='utf8') as lines:
                configuration_object = parse_key_value_lines(lines)
        _check_keys(configuration_object, required_keys)
    except ConfigError:
        raise
    except (FileNotFoundError, ParserError, ValueError) as exception:
        raise ConfigError(str(exception)) from exception
    nested = [key for key, value in configuration_object.items()
              if isinstance(value, (dict, list))]
    if nested:
        raise ConfigError('Configuration must be flat, nested value(s) for: '
                          + ','.join(nested))
    return configuration_object

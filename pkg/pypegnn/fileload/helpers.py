# -*- coding: utf-8 -*-
"""Module containing helpers functions used to load configuration files.

    Functions
    ---------
    lower_dict_keys(dictionary: Dict[str, Any])
        Convert the keys of a dictionary to lower case.
    check_required_keys(required_keys: List[str], keys: List[str])
        Verify if the elements in one list are contained in the other list.
    parse_key_value_lines(lines: Iterable[str])
        Parse flat key=value lines into a dictionary.
"""

from typing import Dict, Any, List, Iterable
import yaml
from ..util.exceptions import ConfigError

def lower_dict_keys(dictionary: Dict[str, Any]) -> Dict[str, Any]:
    """Convert the keys of a dictionary to lower case.

    Parameters
    ----------
    dictionary : Dict[str, Any]
        Source dictionary.

    Returns
    -------
    Dict[str, Any]
        Dictionary with the same values as the source dictionary but all keys
        are converted to lower case.
    """
    lower_keys = [str(key).lower() for key in dictionary.keys()]
    return dict(zip(lower_keys, dictionary.values()))

def check_required_keys(required_keys: List[str], keys: Iterable[str]) -> List[str]:
    """Verify if the elements in one list are contained in the other list.

    Parameters
    ----------
    required_keys : List[str]
        List containing the elements to search for.
    keys : Iterable[str]
        Elements to search from.

    Returns
    -------
    List[str]
        List of elements in the required_keys that are not included in keys.
    """
    keys = set(keys)
    return [key for key in required_keys if key not in keys]

def parse_key_value_lines(lines: Iterable[str]) -> Dict[str, Any]:
    """Parse flat key=value lines into a dictionary.

    Blank lines and lines starting with # are skipped. Values are typed
    with YAML scalar resolution, so ``epochs=200`` yields an int,
    ``lr=0.001`` a float and ``symmetric=false`` a bool.

    Parameters
    ----------
    lines : Iterable[str]
        Lines of the configuration file.

    Returns
    -------
    Dict[str, Any]
        Parsed configuration, keys in lower case.

    Raises
    ------
    ConfigError
        When a line has no equal sign, an empty key or a duplicated key.
    """
    config = {}
    for number, raw_line in enumerate(lines, start=1):
        line = raw_line.strip()
        if not line or line.startswith('#'):
            continue
        key, separator, value = line.partition('=')
        key = key.strip().lower()
        if not separator or not key:
            raise ConfigError(f'Malformed configuration line {number}: {raw_line.rstrip()}')
        if key in config:
            raise ConfigError(f'Duplicated configuration key on line {number}: {key}')
        value = value.strip()
        config[key] = yaml.safe_load(value) if value else None
    return config

# -*- coding: utf-8 -*-
"""Run configuration for the command line.

Values are merged with the precedence defaults < configuration file <
command line flags, then validated as a whole; every invalid field is
reported in a single ConfigError.
"""

import math
from dataclasses import dataclass, field, fields, asdict
from typing import Any, Dict, List, Optional, Tuple

from ..fileload import load_config_file
from ..gnnops import OPERATOR_KINDS
from ..model import FitSettings, ModelSpec
from ..pipeline import SplitSpec
from ..pipeline.dataset import MIN_SYNTH_POINTS
from ..spatialgraph import EDGE_WEIGHT_SCHEMES
from ..util.exceptions import ConfigError
from ..util.functions import config_hash

# Fields that locate inputs and outputs; they do not change results.
RUNTIME_FIELDS = ('data', 'out_dir', 'workers')

# Configuration keys accepted as aliases of a field name.
ALIASES = {'lambda': 'lam'}

@dataclass
class TrainConfig:
    """Settings of one training run.

    The ``flag`` metadata is the command line spelling when it differs from
    the field name with dashes.
    """
    operator: str = 'sage'
    lam: float = field(default=0.5, metadata={'flag': 'lambda'})
    k: int = 5
    embed_dim: int = 64
    hidden_dim: int = 64
    n_scales: int = 16
    sigma_min: float = 0.01
    sigma_max: float = 1.0
    slope: float = 0.2
    use_posenc: bool = True
    symmetric: bool = False
    edge_weights: str = 'binary'
    batch_size: int = 512
    epochs: int = 200
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    patience: int = 20
    seed: int = 0
    train_frac: float = 0.70
    test_frac: float = 0.15
    eval_frac: float = 0.15
    grid_n: int = 20
    data: str = ''
    out_dir: str = '.'
    workers: int = 1

    @classmethod
    def from_mapping(cls, values: Dict[str, Any]) -> 'TrainConfig':
        """Typed and validated configuration from merged raw values."""
        return cls(**coerce_fields(cls, values)).validate()

    def validate(self) -> 'TrainConfig':
        """Check every field, raising one ConfigError listing all problems."""
        errors = []
        for item in fields(self):
            if item.type is float and not math.isfinite(getattr(self, item.name)):
                errors.append(f'{item.name}: must be finite, got {getattr(self, item.name)}')
        if self.operator not in OPERATOR_KINDS:
            errors.append(f'operator: expected one of {",".join(OPERATOR_KINDS)}, '
                          f'got {self.operator!r}')
        if self.edge_weights not in EDGE_WEIGHT_SCHEMES:
            errors.append(f'edge_weights: expected one of {",".join(EDGE_WEIGHT_SCHEMES)}, '
                          f'got {self.edge_weights!r}')
        if not 0.0 <= self.lam <= 1.0:
            errors.append(f'lambda: must lie in [0, 1], got {self.lam}')
        for name in ('k', 'embed_dim', 'hidden_dim', 'n_scales', 'batch_size', 'epochs',
                     'patience', 'workers', 'sigma_min', 'sigma_max', 'lr', 'eps',
                     'train_frac', 'test_frac', 'eval_frac'):
            if getattr(self, name) <= 0:
                errors.append(f'{name}: must be positive, got {getattr(self, name)}')
        if self.slope < 0:
            errors.append(f'slope: must be non negative, got {self.slope}')
        if self.seed < 0:
            errors.append(f'seed: must be non negative, got {self.seed}')
        if self.batch_size == 1:
            errors.append('batch_size: must be at least 2 to build a neighbour graph')
        if self.grid_n < 2:
            errors.append(f'grid_n: must be at least 2, got {self.grid_n}')
        if 0 < self.sigma_min and self.sigma_max <= self.sigma_min:
            errors.append(f'sigma_max: must exceed sigma_min {self.sigma_min}, '
                          f'got {self.sigma_max}')
        for name in ('beta1', 'beta2'):
            if not 0.0 <= getattr(self, name) < 1.0:
                errors.append(f'{name}: must lie in [0, 1), got {getattr(self, name)}')
        fractions = self.train_frac + self.test_frac + self.eval_frac
        if abs(fractions - 1.0) > 1e-9:
            errors.append(f'train_frac, test_frac, eval_frac: must sum to 1, got {fractions}')
        if errors:
            raise ConfigError('Invalid configuration: ' + '; '.join(errors))
        return self

    def protocol_fields(self) -> Dict[str, Any]:
        """Fields that determine results; the configuration echo of outputs."""
        return {key: value for key, value in asdict(self).items()
                if key not in RUNTIME_FIELDS}

    def hash(self) -> str:
        return config_hash(self.protocol_fields())

    def model_spec(self, n_features: int) -> ModelSpec:
        return ModelSpec(n_features, self.operator, self.lam, self.k, self.embed_dim,
                         self.hidden_dim, self.n_scales, self.sigma_min, self.sigma_max,
                         self.slope, self.use_posenc, self.symmetric, self.edge_weights)

    def fit_settings(self) -> FitSettings:
        return FitSettings(self.epochs, self.batch_size, self.lr, self.beta1, self.beta2,
                           self.eps, self.patience, self.seed)

    def split_spec(self) -> SplitSpec:
        return SplitSpec(self.train_frac, self.test_frac, self.eval_frac, self.seed)

@dataclass
class SweepGrid:
    """Cells of a sweep: operators x lambdas x seeds."""
    operators: str = ','.join(OPERATOR_KINDS)
    lambdas: str = '0.25,0.5,0.75'
    n_seeds: int = 3

    @classmethod
    def from_mapping(cls, values: Dict[str, Any]) -> 'SweepGrid':
        return cls(**coerce_fields(cls, values)).validate()

    def operator_list(self) -> List[str]:
        return [name.strip() for name in str(self.operators).split(',') if name.strip()]

    def lambda_list(self) -> List[float]:
        return [float(value) for value in str(self.lambdas).split(',') if value.strip()]

    def validate(self) -> 'SweepGrid':
        errors = []
        unknown = [name for name in self.operator_list() if name not in OPERATOR_KINDS]
        if unknown or not self.operator_list():
            errors.append(f'operators: expected a comma separated subset of '
                          f'{",".join(OPERATOR_KINDS)}, got {self.operators!r}')
        try:
            lambdas = self.lambda_list()
            if not lambdas or any(not 0.0 <= value <= 1.0 for value in lambdas):
                errors.append(f'lambdas: values must lie in [0, 1], got {self.lambdas!r}')
        except ValueError:
            errors.append(f'lambdas: expected comma separated numbers, got {self.lambdas!r}')
        if self.n_seeds < 1:
            errors.append(f'n_seeds: must be positive, got {self.n_seeds}')
        if errors:
            raise ConfigError('Invalid configuration: ' + '; '.join(errors))
        return self

    def cells(self, base_seed: int) -> List[Tuple[str, float, int]]:
        """(operator, lambda, seed) keys in table order."""
        seeds = [base_seed + offset for offset in range(self.n_seeds)]
        return [(operator, lam, seed) for operator in self.operator_list()
                for lam in self.lambda_list() for seed in seeds]

def _coerce(name: str, kind: type, value: Any) -> Tuple[Any, Optional[str]]:
    if kind is bool:
        if isinstance(value, bool):
            return value, None
        if isinstance(value, str) and value.lower() in ('true', 'false'):
            return value.lower() == 'true', None
        return value, f'{name}: expected true or false, got {value!r}'
    if kind is int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value, None
        return value, f'{name}: expected an integer, got {value!r}'
    if kind is float:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value), None
        if isinstance(value, str):
            # YAML leaves exponent forms such as 1e-3 as text.
            try:
                return float(value), None
            except ValueError:
                pass
        return value, f'{name}: expected a number, got {value!r}'
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return str(value), None
    if isinstance(value, str):
        return value, None
    return value, f'{name}: expected text, got {value!r}'

def coerce_fields(cls: type, values: Dict[str, Any]) -> Dict[str, Any]:
    """Map raw values onto the fields of a configuration dataclass.

    Raises
    ------
    ConfigError
        Listing unknown keys and values of the wrong type.
    """
    kinds = {item.name: item.type for item in fields(cls)}
    typed, errors = {}, []
    for key, value in values.items():
        name = ALIASES.get(key, key)
        if name not in kinds:
            errors.append(f'{key}: unknown configuration key')
            continue
        typed[name], error = _coerce(key, kinds[name], value)
        if error:
            errors.append(error)
    if errors:
        raise ConfigError('Invalid configuration: ' + '; '.join(errors))
    return typed

def merge_settings(config_file: Optional[str], flags: Dict[str, Any]) -> Dict[str, Any]:
    """Configuration file values overridden by the flags that were given.

    Parameters
    ----------
    config_file : str, optional
        Path of a YAML or key=value file.
    flags : Dict[str, Any]
        Parsed command line values, None for flags that were not given.

    Returns
    -------
    Dict[str, Any]
        Raw values keyed by configuration name (defaults not included).
    """
    merged = dict(load_config_file(config_file)) if config_file else {}
    merged = {ALIASES.get(key, key): value for key, value in merged.items()}
    merged.update({key: value for key, value in flags.items() if value is not None})
    return merged

@dataclass
class SynthConfig:
    """Settings of the synthetic dataset command."""
    n: int = 2000
    seed: int = 0
    noise_sd: float = 0.1
    out: str = ''
    out_dir: str = '.'

    @classmethod
    def from_mapping(cls, values: Dict[str, Any]) -> 'SynthConfig':
        return cls(**coerce_fields(cls, values)).validate()

    def validate(self) -> 'SynthConfig':
        errors = []
        if self.n < MIN_SYNTH_POINTS:
            errors.append(f'n: must be at least {MIN_SYNTH_POINTS}, got {self.n}')
        if self.seed < 0:
            errors.append(f'seed: must be non negative, got {self.seed}')
        if self.noise_sd < 0:
            errors.append(f'noise_sd: must be non negative, got {self.noise_sd}')
        if errors:
            raise ConfigError('Invalid configuration: ' + '; '.join(errors))
        return self

    def protocol_fields(self) -> Dict[str, Any]:
        return {'n': self.n, 'seed': self.seed, 'noise_sd': self.noise_sd}

@dataclass
class EvalConfig:
    """Settings of the evaluation command."""
    checkpoint: str = ''
    data: str = ''
    out_dir: str = '.'
    grid_n: int = 20
    batch_size: int = 512

    @classmethod
    def from_mapping(cls, values: Dict[str, Any]) -> 'EvalConfig':
        return cls(**coerce_fields(cls, values)).validate()

    def validate(self) -> 'EvalConfig':
        errors = []
        for name in ('checkpoint', 'data'):
            if not getattr(self, name):
                errors.append(f'{name}: a path is required')
        if self.grid_n < 2:
            errors.append(f'grid_n: must be at least 2, got {self.grid_n}')
        if self.batch_size < 2:
            errors.append(f'batch_size: must be at least 2, got {self.batch_size}')
        if errors:
            raise ConfigError('Invalid configuration: ' + '; '.join(errors))
        return self

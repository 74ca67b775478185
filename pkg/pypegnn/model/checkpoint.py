# -*- coding: utf-8 -*-
"""Checkpoint container.

A checkpoint is a YAML mapping preceded by the output header comment:

    format: pypegnn-checkpoint-1
    config: flat echo of the training configuration
    model: ModelSpec fields
    transform: TransformRecord fields (normalization statistics and extents)
    parameters: {name: {shape: [rows, cols], values: [...]}}

Floats are dumped with repr, so loading restores every parameter bit for bit.
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np
import yaml

from ..diffcore import Tensor
from ..fileload import load_yaml_file
from ..gnnops import OperatorLayer
from ..pipeline import TransformRecord
from ..posenc import PosEncoderParams
from ..util.exceptions import ContractError, DimensionError
from .pegnn import ModelSpec, PeGnnModel, N_LAYERS

FORMAT = 'pypegnn-checkpoint-1'
REQUIRED_KEYS = ['format', 'config', 'model', 'transform', 'parameters']

def _encode_tensor(tensor: Tensor) -> Dict[str, Any]:
    return {'shape': list(tensor.shape), 'values': tensor.values.ravel().tolist()}

def _decode_tensor(name: str, entry: Dict[str, Any]) -> Tensor:
    rows, cols = entry['shape']
    values = np.array(entry['values'], dtype=np.float64)
    if values.shape[0] != rows * cols:
        raise DimensionError(f'Parameter {name} declares shape {(rows, cols)} '
                             f'but holds {values.shape[0]} values')
    return Tensor(values.reshape(rows, cols), requires_grad=True, name=name)

def save_checkpoint(path: str, model: PeGnnModel, record: TransformRecord,
                    config: Dict[str, Any], header: Optional[str] = None) -> None:
    """Write model, transform record and configuration echo to path."""
    document = {
        'format': FORMAT,
        'config': dict(config),
        'model': model.spec.to_dict(),
        'transform': record.to_dict(),
        'parameters': {name: _encode_tensor(tensor)
                       for name, tensor in model.parameters().items()},
    }
    with open(path, 'w', encoding='utf8') as checkpoint_file:
        if header:
            checkpoint_file.write(header + '\n')
        yaml.safe_dump(document, checkpoint_file, sort_keys=False,
                       default_flow_style=None, width=100)

def load_checkpoint(path: str) -> Tuple[PeGnnModel, TransformRecord, Dict[str, Any]]:
    """Read a checkpoint written by save_checkpoint.

    Returns
    -------
    Tuple[PeGnnModel, TransformRecord, Dict[str, Any]]
        Restored model, transform record and configuration echo.

    Raises
    ------
    ContractError
        When the format tag or the parameter set does not match.
    """
    document = load_yaml_file(path, REQUIRED_KEYS)
    if document['format'] != FORMAT:
        raise ContractError(f'Unsupported checkpoint format {document["format"]!r}')
    spec = ModelSpec(**document['model'])
    params = {name: _decode_tensor(name, entry)
              for name, entry in document['parameters'].items()}
    try:
        posenc = PosEncoderParams(spec.n_scales, spec.sigma_min, spec.sigma_max,
                                  params['posenc.w_hidden'], params['posenc.b_hidden'],
                                  params['posenc.w_out'], params['posenc.b_out'])
        layers = []
        widths = [spec.n_features + spec.embed_dim] + [spec.hidden_dim] * N_LAYERS
        for position in range(N_LAYERS):
            prefix = f'layer{position}.'
            layer_params = {name[len(prefix):]: tensor for name, tensor in params.items()
                            if name.startswith(prefix)}
            layers.append(OperatorLayer(spec.operator, widths[position], widths[position + 1],
                                        layer_params, spec.slope))
        heads = [{'w': params[f'{head}.w'], 'b': params[f'{head}.b']}
                 for head in ('head_main', 'head_moran')]
    except KeyError as exception:
        raise ContractError(f'Checkpoint lacks parameter {exception}') from exception
    model = PeGnnModel(spec, posenc, layers, heads[0], heads[1])
    unexpected = set(params) - set(model.parameters())
    if unexpected:
        raise ContractError(f'Checkpoint holds unknown parameter(s): {sorted(unexpected)}')
    return model, TransformRecord.from_dict(document['transform']), document['config']

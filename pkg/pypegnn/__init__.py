from .diffcore import Tensor, Tape, backward
from .spatialgraph import SpatialGraph, knn_graph, row_standardized_weights
from .posenc import PosEncoderParams, encode
from .gnnops import OperatorLayer, apply_layer
from .moran import LocalMoran, local_moran
from .model import ModelSpec, PeGnnModel, loss, train_step, fit, predict
from .model import save_checkpoint, load_checkpoint
from .pipeline import PointSet, load_csv, save_csv, synth_dataset, preprocess, split
from .pipeline import compute_metrics, spatial_variance_grid
from .fileload.loadyaml import load_yaml_file

__version__ = '1.0.0'

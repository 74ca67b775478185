from .dataset import PointSet
from .dataset import load_csv
from .dataset import save_csv
from .dataset import synth_dataset
from .dataset import FLOAT_FORMAT
from .preprocess import PreparedData
from .preprocess import TransformRecord
from .preprocess import fit_transform
from .preprocess import preprocess
from .split import SplitSpec
from .split import SplitIndices
from .split import split
from .split import iterate_batches
from .split import ordered_batches
from .metrics import Metrics
from .metrics import compute_metrics
from .diagnostics import SpatialGrid
from .diagnostics import spatial_variance_grid
from .diagnostics import scatter_pairs

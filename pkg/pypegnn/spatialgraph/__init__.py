from .knn import SpatialGraph
from .knn import knn_graph
from .knn import symmetrize
from .knn import inverse_distance_weights
from .knn import row_standardized_weights
from .knn import build_batch_graph
from .knn import EDGE_WEIGHT_SCHEMES

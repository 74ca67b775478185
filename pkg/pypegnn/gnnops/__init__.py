from .operators import OperatorLayer
from .operators import OPERATOR_KINDS
from .operators import NEIGHBOUR_KINDS
from .operators import gcn_forward
from .operators import gcn_normalization
from .operators import sage_forward
from .operators import transformer_forward
from .operators import transformer_attention
from .operators import gat_forward
from .operators import gat_attention
from .operators import apply_layer

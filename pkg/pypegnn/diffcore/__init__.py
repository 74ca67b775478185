from .tensor import Tensor
from .tensor import Tape
from .tensor import backward
from .tensor import active_tape
from .ops import matmul
from .ops import elementwise
from .ops import relu
from .ops import leaky_relu
from .ops import gather_rows
from .ops import slice_rows
from .ops import concat_cols
from .ops import row_sum
from .ops import sum_all
from .ops import mean_all
from .ops import scale
from .segment import segment_reduce
from .segment import segment_softmax
from .segment import segment_counts
from .init import uniform_parameter
from .init import zero_parameter

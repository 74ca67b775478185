from .functions import get_logger
from .functions import timing
from .functions import config_hash
from .functions import output_header
from .exceptions import DimensionError
from .exceptions import DomainError
from .exceptions import SegmentIndexError
from .exceptions import ContractError
from .exceptions import DataError
from .exceptions import ConfigError
from .exceptions import NumericalError

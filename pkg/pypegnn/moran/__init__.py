from .local import LocalMoran
from .local import local_moran
from .local import moran_target_for_batch

from .encoder import PosEncoderParams
from .encoder import sinusoidal_features
from .encoder import encode
from .encoder import zero_embedding

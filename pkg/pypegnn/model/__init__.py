from .pegnn import ModelSpec
from .pegnn import PeGnnModel
from .pegnn import loss
from .optimizer import AdamOptimizer
from .training import FitSettings
from .training import TrainingHistory
from .training import rng_streams
from .training import train_step
from .training import fit
from .training import predict
from .checkpoint import save_checkpoint
from .checkpoint import load_checkpoint

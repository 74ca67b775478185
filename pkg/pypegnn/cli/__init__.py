from .config import TrainConfig
from .config import SweepGrid
from .config import SynthConfig
from .config import EvalConfig
from .commands import cmd_synth
from .commands import cmd_train
from .commands import cmd_sweep
from .commands import cmd_eval
from .commands import run_training
from .main import main

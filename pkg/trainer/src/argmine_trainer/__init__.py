"""Fine-tunes text encoders on token- and sequence-classification task
files and writes prediction files in the planner's exchange format."""

from .run import TrainerConfig, TrainResult, predict, train

__all__ = ["TrainerConfig", "TrainResult", "predict", "train"]

__version__ = "0.1.0"

from .errors import CheckpointError
from .checkpoint import MAGIC, VERSION, encode, decode, save_checkpoint, load_checkpoint
from .bundle import model_tensors, config_tensors, config_from_tensors, restore_model

from .config import OptimizerConfig
from .adamw import AdamW
from .schedule import WarmupCosineSchedule

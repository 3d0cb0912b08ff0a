from .errors import TrainingError, NonFiniteLossError
from .task import Task
from .loss_log import LossLog
from .common import STEP_KEY, ensure_finite, resume_state
from .depth_trainer import DEPTH_COLUMNS, DepthTrainer
from .view_trainer import VIEW_COLUMNS, DISC_PREFIX, ViewTrainer

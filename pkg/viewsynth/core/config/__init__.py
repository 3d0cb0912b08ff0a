from .errors import ConfigError
from .run_config import RunConfig, SECTIONS

from .registry import Registry
from .settings import RuntimeSettings

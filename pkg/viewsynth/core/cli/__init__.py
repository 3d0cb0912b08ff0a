from .cli import app
from .errors import UsageError, ERROR_KINDS, EXIT_RUNTIME, EXIT_VALIDATION

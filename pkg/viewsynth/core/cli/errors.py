import functools

import typer
from loguru import logger

from viewsynth.core.checkpoint import CheckpointError
from viewsynth.core.config import ConfigError
from viewsynth.core.geometry import GeometryError
from viewsynth.core.scenes import DatasetError, GenerationError
from viewsynth.core.tensor import TensorError
from viewsynth.core.training import NonFiniteLossError, TrainingError
from viewsynth.core.warp import WarpError

EXIT_RUNTIME = 1
EXIT_VALIDATION = 2


class UsageError(ValueError):
    """A flag value the command cannot work with."""

    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(f"{flag}: {message}")


ERROR_KINDS = [
    (UsageError, "usage", EXIT_VALIDATION),
    (ConfigError, "config", EXIT_VALIDATION),
    (GeometryError, "geometry", EXIT_VALIDATION),
    (DatasetError, "dataset", EXIT_RUNTIME),
    (GenerationError, "generation", EXIT_RUNTIME),
    (CheckpointError, "checkpoint", EXIT_RUNTIME),
    (NonFiniteLossError, "nonfinite", EXIT_RUNTIME),
    (TrainingError, "training", EXIT_RUNTIME),
    (WarpError, "warp", EXIT_RUNTIME),
    (TensorError, "tensor", EXIT_RUNTIME),
    (OSError, "io", EXIT_RUNTIME),
]


def classify(error: Exception) -> tuple[str, int] | None:
    for kind, name, code in ERROR_KINDS:
        if isinstance(error, kind):
            return name, code
    return None


def handle_errors(func):
    """Turn known failures into one ``error[<kind>]: <message>`` line on stderr and an exit code."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except Exception as e:
            found = classify(e)
            if found is None:
                raise
            name, code = found
            logger.debug(f"{func.__name__} failed: {e!r}")
            message = " ".join(str(e).split())
            typer.echo(f"error[{name}]: {message}", err=True)
            raise typer.Exit(code=code)
    return wrapper

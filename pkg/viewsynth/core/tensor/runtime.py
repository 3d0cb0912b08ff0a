from contextlib import contextmanager
from typing import Iterator

import numpy as np

from viewsynth.core.utils import SingletonMeta


class Runtime(metaclass=SingletonMeta):
    """Process-wide engine switches: working dtype and gradient recording."""

    def __init__(self):
        self.dtype = np.float32
        self.grad_enabled = True

    def set_dtype(self, dtype) -> "Runtime":
        dtype = np.dtype(dtype).type
        if dtype not in (np.float32, np.float64):
            raise ValueError(f"unsupported dtype {dtype}, expected float32 or float64")
        self.dtype = dtype
        return self


def default_dtype():
    return Runtime().dtype


@contextmanager
def precision(dtype) -> Iterator[None]:
    """Temporarily switch the working dtype (64-bit is used for gradient checks)."""
    runtime = Runtime()
    previous = runtime.dtype
    runtime.set_dtype(dtype)
    try:
        yield
    finally:
        runtime.dtype = previous


@contextmanager
def no_grad() -> Iterator[None]:
    runtime = Runtime()
    previous = runtime.grad_enabled
    runtime.grad_enabled = False
    try:
        yield
    finally:
        runtime.grad_enabled = previous

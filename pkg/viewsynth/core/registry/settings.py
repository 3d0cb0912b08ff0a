import os
from dataclasses import dataclass

from viewsynth.core.registry.registry import Registry


@dataclass
class RuntimeSettings:
    """Process settings read from the environment (``.env`` is loaded by ``bootstrap``)."""
    threads: int = 1
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        threads = os.getenv("NVS_THREADS")
        return cls(
            threads=max(int(threads), 1) if threads else (os.cpu_count() or 1),
            log_level=os.getenv("NVS_LOG_LEVEL", "INFO").upper(),
        )

    @classmethod
    def current(cls) -> "RuntimeSettings":
        return Registry().get(cls) or cls.from_env()

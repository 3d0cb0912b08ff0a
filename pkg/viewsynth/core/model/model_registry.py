from typing import Callable
from typing_extensions import Self

from viewsynth.core.utils import SingletonMeta


class ModelRegistry(metaclass=SingletonMeta):
    """Model builders by name; checkpoints record the name to rebuild the architecture."""

    def __init__(self):
        self.registry: dict[str, Callable] = {}

    def register(self, name: str, builder: Callable) -> Self:
        self.registry[name] = builder
        return self

    def get(self, name: str) -> Callable:
        if name not in self.registry:
            raise KeyError(f"no model registered under {name!r}; known: {sorted(self.registry)}")
        return self.registry[name]

    def names(self) -> list[str]:
        return sorted(self.registry)

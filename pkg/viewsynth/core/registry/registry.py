from typing import TypeVar
from typing_extensions import Self

from viewsynth.core.utils.singleton import SingletonMeta

T = TypeVar('T')


class Registry(metaclass=SingletonMeta):
    """Process-wide objects keyed by their type; ``bootstrap`` fills it in."""

    def __init__(self):
        self.registry: dict[type, object] = {}

    def register(self, value: T, key: type[T] | None = None) -> Self:
        self.registry[key or type(value)] = value
        return self

    def get(self, key: type[T], default: T | None = None) -> T | None:
        return self.registry.get(key, default)

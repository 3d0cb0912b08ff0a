from abc import ABC, abstractmethod
from typing import ClassVar, Dict

import numpy as np
from pydantic import BaseModel


class Model(ABC):
    """
    A network the registry can rebuild from its config. ``name`` is also the
    checkpoint key prefix; ``predict`` works on single unbatched samples with
    images in [0, 1].
    """
    name: ClassVar[str]
    config_class: ClassVar[type[BaseModel]]

    @staticmethod
    def signed_batch(image) -> np.ndarray:
        """``[3, H, W]`` in [0, 1] to a batch of one in [-1, 1]."""
        return np.asarray(image)[None] * 2.0 - 1.0

    @abstractmethod
    def predict(self, model_input: Dict) -> np.ndarray:
        """Predict using the model"""
        pass

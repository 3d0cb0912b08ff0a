from typing import Type, get_args, get_origin

import numpy as np
from pydantic import BaseModel, ValidationError

from viewsynth.core.checkpoint.errors import CheckpointError
from viewsynth.core.model import ModelRegistry
from viewsynth.core.nn import Module


def model_tensors(model: Module, prefix: str) -> dict[str, np.ndarray]:
    return {f"{prefix}.{name}": p.data for name, p in model.named_parameters()}


def prefixed(tensors: dict[str, np.ndarray], prefix: str) -> dict[str, np.ndarray]:
    cut = len(prefix) + 1
    return {name[cut:]: value for name, value in tensors.items() if name.startswith(prefix + ".")}


def config_tensors(name: str, config: BaseModel) -> dict[str, np.ndarray]:
    """Architecture hyper-parameters as ``config.<name>.<field>`` tensors."""
    out = {}
    for field, value in config.model_dump().items():
        out[f"config.{name}.{field}"] = np.asarray(value, dtype=np.float64)
    return out


def config_from_tensors(tensors: dict[str, np.ndarray], name: str, cls: Type[BaseModel]) -> BaseModel:
    values = {}
    for field, info in cls.model_fields.items():
        key = f"config.{name}.{field}"
        if key not in tensors:
            continue
        value = np.asarray(tensors[key], dtype=np.float64).reshape(-1)
        if get_origin(info.annotation) is tuple:
            values[field] = tuple(int(round(v)) if int in get_args(info.annotation) else float(v) for v in value)
        elif value.size != 1:
            raise CheckpointError(f"{key} holds {value.size} values, expected one")
        elif info.annotation is bool:
            values[field] = bool(round(value[0]))
        elif info.annotation is int:
            values[field] = int(round(value[0]))
        else:
            values[field] = float(value[0])
    try:
        return cls.model_validate(values)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or name
        raise CheckpointError(f"stored {name} config is invalid at {where}: {first['msg']}") from None


def stored_models(tensors: dict[str, np.ndarray]) -> list[str]:
    return sorted({key.split(".")[1] for key in tensors if key.startswith("config.")})


def restore_model(tensors: dict[str, np.ndarray], name: str | None = None):
    """Rebuild a registered model from a checkpoint table and load its weights."""
    names = stored_models(tensors)
    if name is None:
        if len(names) != 1:
            raise CheckpointError(f"checkpoint holds models {names}; name the one to restore")
        name = names[0]
    if name not in names:
        raise CheckpointError(f"checkpoint holds no {name!r} model (found {names})")
    builder = ModelRegistry().get(name)
    config = config_from_tensors(tensors, name, builder.config_class)
    model = builder(config)
    try:
        model.load_state_dict(prefixed(tensors, name))
    except (KeyError, ValueError) as e:
        raise CheckpointError(f"checkpoint does not fit {name}: {e}") from None
    return model

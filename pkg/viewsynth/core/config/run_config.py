from pathlib import Path
from typing import Any
from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from viewsynth.core.config.errors import ConfigError
from viewsynth.core.losses import LossWeights
from viewsynth.core.model import DepthNetConfig, ViewNetConfig
from viewsynth.core.optim import OptimizerConfig

SECTIONS = {
    "view": ViewNetConfig,
    "depth": DepthNetConfig,
    "loss": LossWeights,
    "optim": OptimizerConfig,
}


class RunConfig(BaseModel):
    """
    Everything one training run needs. Config files are flat ``key = value``
    lines (``#`` starts a comment); each key names a field of one section or of
    the run itself, e.g. ``channels``, ``lambda_in``, ``lr``, ``steps``.
    """
    model_config = ConfigDict(extra="forbid")

    view: ViewNetConfig = Field(default_factory=ViewNetConfig)
    depth: DepthNetConfig = Field(default_factory=DepthNetConfig)
    loss: LossWeights = Field(default_factory=LossWeights)
    optim: OptimizerConfig = Field(default_factory=OptimizerConfig)
    steps: int = Field(default=500, gt=0)
    batch_size: int = Field(default=4, gt=0)
    seed: int = Field(default=0, ge=0)
    checkpoint_every: int = Field(default=100, gt=0)
    data: str | None = None
    out: str | None = None

    @classmethod
    def from_mapping(cls, values: dict[str, Any]) -> Self:
        nested: dict[str, Any] = {name: {} for name in SECTIONS}
        own = set(cls.model_fields) - set(SECTIONS)
        for key, value in values.items():
            if isinstance(value, str) and "," in value:
                value = [v.strip() for v in value.split(",") if v.strip()]
            owner = next((s for s, model in SECTIONS.items() if key in model.model_fields), None)
            if owner is not None:
                nested[owner][key] = value
            elif key in own:
                nested[key] = value
            else:
                raise ConfigError(f"unknown config key {key!r}")
        try:
            return cls.model_validate(nested)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first["loc"])
            raise ConfigError(f"invalid value for {where}: {first['msg']}") from None

    @classmethod
    def parse(cls, text: str) -> Self:
        values: dict[str, str] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {number}: expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigError(f"line {number}: missing key")
            if key in values:
                raise ConfigError(f"line {number}: duplicate key {key!r}")
            values[key] = value
        return cls.from_mapping(values)

    @classmethod
    def from_file(cls, path: Path) -> Self:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
        return cls.parse(text)

    def with_overrides(self, **values: Any) -> Self:
        present = {k: v for k, v in values.items() if v is not None}
        try:
            return self.model_validate({**self.model_dump(), **present})
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first["loc"])
            raise ConfigError(f"invalid value for {where}: {first['msg']}") from None

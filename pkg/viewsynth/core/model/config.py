from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ViewNetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    blocks: int = Field(default=8, ge=0, description="GLSA blocks in the encoder (N)")
    render_blocks: int = Field(default=6, ge=0, description="transformer blocks per renderer (M)")
    channels: int = Field(default=256, gt=0)
    window: int = Field(default=5, ge=3)
    inducing: int = Field(default=32, gt=0)
    heads: int = Field(default=4, gt=0)
    pos_dim: int = Field(default=32, gt=0)
    image_size: int = Field(default=64, gt=0)
    use_global: bool = True
    use_local: bool = True
    mask_as_feature: bool = False

    @field_validator("window")
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"window must be odd, got {value}")
        return value

    @field_validator("image_size")
    @classmethod
    def _divisible_size(cls, value: int) -> int:
        if value % 16:
            raise ValueError(f"image_size must be divisible by 16, got {value}")
        return value

    @model_validator(mode="after")
    def _heads_divide(self):
        if self.channels % 4:
            raise ValueError(f"channels must be divisible by 4, got {self.channels}")
        for width in (self.channels, self.channels + self.pos_dim):
            if width % self.heads:
                raise ValueError(f"{self.heads} heads do not divide {width} channels")
        return self


class DepthNetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    widths: tuple[int, ...] = (16, 32, 64, 128)
    min_depth: float = Field(default=0.5, gt=0)
    max_depth: float = Field(default=12.0, gt=0)

    @model_validator(mode="after")
    def _ordered_range(self):
        if self.min_depth >= self.max_depth:
            raise ValueError(f"min_depth {self.min_depth} must be below max_depth {self.max_depth}")
        if len(self.widths) < 2:
            raise ValueError("DepthNet needs at least two levels")
        return self

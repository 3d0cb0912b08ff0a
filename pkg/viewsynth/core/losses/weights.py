from pydantic import BaseModel, ConfigDict, Field


class LossWeights(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(default=0.85, ge=0, le=1, description="SSIM share of the photometric error")
    lambda_sm: float = Field(default=1e-3, ge=0)
    lambda_c: float = Field(default=1.0, ge=0)
    lambda_adv: float = Field(default=0.1, ge=0)
    lambda_in: float = Field(default=1.0, ge=0)
    lambda_out: float = Field(default=1.0, ge=0)
    detach: bool = True

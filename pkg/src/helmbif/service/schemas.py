"""Request and response models for the HTTP API.

Field constraints mirror the library preconditions, so malformed requests
fail validation (HTTP 422) before any computation starts.
"""

from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..config import DEFAULTS


class MuTableRequest(BaseModel):
    m_min: int = Field(ge=4, le=64)
    m_max: int = Field(ge=4, le=64)
    fmt: str = Field(default="csv", pattern="^(csv|json)$")

    @model_validator(mode="after")
    def _ordered(self):
        if self.m_min > self.m_max:
            raise ValueError("m_min must not exceed m_max")
        return self


class MuTableRow(BaseModel):
    m: int
    mu: float
    slope: float
    j0_at_mu: float
    j1_at_mu: float
    jm_at_mu: float


class MuTableResponse(BaseModel):
    rows: list[MuTableRow]
    files: dict[str, str]
    error: Optional[str] = None


class VerifyRequest(BaseModel):
    m_max: int = Field(ge=4, le=64)


class VerifyResponse(BaseModel):
    passed: bool = False
    report: dict = Field(default_factory=dict)
    files: dict[str, str] = Field(default_factory=dict)
    error: Optional[str] = None


class ScalingRequest(BaseModel):
    m: int = Field(ge=4, le=64)
    eps_list: list[float]
    control_offset: float = DEFAULTS.control_offset
    modes: int = Field(default=DEFAULTS.modes, ge=4, le=32)
    fmt: str = Field(default="csv", pattern="^(csv|json)$")


class ScalingResponse(BaseModel):
    slope_at_mu: float = 0.0
    slope_at_control: float = 0.0
    rows: list[list[float]] = Field(default_factory=list)
    files: dict[str, str] = Field(default_factory=dict)
    error: Optional[str] = None


class BranchRequest(BaseModel):
    m: int = Field(ge=4, le=64)
    eps_target: float = Field(ge=-0.05, le=0.05)
    steps: int = Field(ge=1, le=1000)
    shape_modes: int = Field(ge=1, le=4)
    tol: float = Field(default=DEFAULTS.refine_tol, gt=0)
    modes: int = Field(default=DEFAULTS.modes, ge=4, le=32)


class BranchResponse(BaseModel):
    points: list[dict] = Field(default_factory=list)
    failure: Optional[dict] = None
    files: dict[str, str] = Field(default_factory=dict)
    error: Optional[str] = None


class FigureRequest(BaseModel):
    m_list: list[int]
    eps: float = Field(ge=-0.2, le=0.2)
    grid_n: int = Field(default=DEFAULTS.grid_n, ge=4, le=512)
    first_order: bool = False
    modes: int = Field(default=DEFAULTS.modes, ge=4, le=32)
    tol: float = Field(default=DEFAULTS.refine_tol, gt=0)
    steps: Optional[int] = Field(default=None, ge=1, le=1000)

    @field_validator("m_list")
    @classmethod
    def _modes_valid(cls, value):
        if not value:
            raise ValueError("m_list must not be empty")
        for m in value:
            if not 4 <= m <= 64:
                raise ValueError(f"each m must lie in [4, 64], got {m}")
        return value


class FigureResponse(BaseModel):
    files: dict[str, str] = Field(default_factory=dict)
    error: Optional[str] = None

"""Pydantic request/response schemas of the compute service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, field_validator

Format = Literal["csv", "json"]
Family = Literal["sc", "ac"]


class GridRequest(BaseModel):
    grid_n: int = Field(default=401, ge=2, le=4001)
    range: list[float] | Literal["auto"] = "auto"
    format: Format = "csv"

    @field_validator("range")
    @classmethod
    def _range_shape(cls, v):
        if v == "auto":
            return v
        if len(v) != 4:
            raise ValueError("range must be [g_min, g_max, gp_min, gp_max]")
        return v


class EnvMapRequest(GridRequest):
    omega: float = Field(ge=1.0)


class ReactivationMapRequest(GridRequest):
    tau: float = Field(gt=0.0, lt=1.0)
    omega: Literal["eb"] = "eb"


class ThresholdsRequest(BaseModel):
    family: Family
    tau_values: list[float] = Field(min_length=1, max_length=4001)
    format: Format = "csv"

    @field_validator("tau_values")
    @classmethod
    def _tau_open_interval(cls, v):
        if any(not 0.0 < t < 1.0 for t in v):
            raise ValueError("every tau must lie in (0, 1)")
        return v


class CurvesRequest(BaseModel):
    family: Family
    tau: float = Field(gt=0.0, lt=1.0)
    points: int = Field(default=201, ge=2, le=4001)
    format: Format = "csv"


class DiscordRequest(BaseModel):
    omega: float | None = Field(default=None, ge=1.0)
    g: float | None = None
    gp: float | None = None
    cm_text: str | None = None
    method: Literal["numeric", "closed", "both"] = "both"


class EprVariancesRequest(BaseModel):
    tau: float = Field(ge=0.0, lt=1.0)
    omega: float | Literal["eb"] = "eb"
    g: float
    gp: float
    mu: float | None = Field(default=None, ge=1.0)


class PointRequest(BaseModel):
    """Asymptotic entanglement report for one environment."""

    tau: float = Field(gt=0.0, lt=1.0)
    omega: float | Literal["eb"] = "eb"
    g: float
    gp: float
    mu: float | None = Field(default=None, ge=1.0)


class QuditStateSpec(BaseModel):
    kind: Literal["werner", "isotropic", "random", "triplet"] = "werner"
    d: int = Field(default=2, ge=2, le=8)
    mu: float | None = None
    gamma: float | None = None
    seed: int = 0


class QuditStateRequest(BaseModel):
    state: QuditStateSpec = QuditStateSpec()


class QuditTwirlRequest(BaseModel):
    state: QuditStateSpec = QuditStateSpec()
    mode: Literal["uu", "uustar"] = "uu"
    method: Literal["design", "haar_mc"] = "design"
    samples: int = Field(default=100_000, ge=1, le=10_000_000)
    seed: int = 0


class QuditDepolarizeRequest(BaseModel):
    probs: list[float] = Field(min_length=4, max_length=4)
    input: Literal["triplet"] = "triplet"


class QuditDephaseRequest(BaseModel):
    d: int = Field(default=5, ge=2, le=8)
    seed: int = 0


class QuditDilateRequest(BaseModel):
    probs: list[float] | None = Field(default=None, min_length=4, max_length=4)
    design: Literal["clifford"] | None = None
    mode: Literal["uu", "uustar"] = "uu"


class TableResponse(BaseModel):
    config: dict
    columns: list[str]
    values: dict[str, list]


class ReportResponse(BaseModel):
    config: dict
    report: dict

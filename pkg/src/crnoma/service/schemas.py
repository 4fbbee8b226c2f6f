"""Pydantic request/response models for the service API."""

from __future__ import annotations

import math
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from ..channel import SystemConfig
from ..selection import SCHEME_IDS

__all__ = [
    "SystemConfigModel",
    "SimulateRequest",
    "AnalyticRequest",
    "Table1Request",
    "EstimateRow",
    "AnalyticRow",
    "Table1Row",
    "SimulateResponse",
    "AnalyticResponse",
    "Table1Response",
    "HealthResponse",
]

TABLE1_POWER_GRID = (0.0, 5.0, 10.0, 15.0, 20.0)


class SystemConfigModel(BaseModel):
    n_bs: int = Field(ge=1)
    m_pu: int = Field(ge=1)
    k_su: int = Field(ge=1)
    omega_h: float = Field(gt=0)
    omega_g: float = Field(gt=0)
    gamma_p_th: float = Field(gt=0)
    gamma_s_th: float = Field(gt=0)

    def to_core(self) -> SystemConfig:
        return SystemConfig(**self.model_dump())

    @classmethod
    def from_core(cls, config: SystemConfig) -> "SystemConfigModel":
        return cls(
            n_bs=config.n_bs,
            m_pu=config.m_pu,
            k_su=config.k_su,
            omega_h=config.omega_h,
            omega_g=config.omega_g,
            gamma_p_th=config.gamma_p_th,
            gamma_s_th=config.gamma_s_th,
        )


def _check_grid(grid: list[float]) -> list[float]:
    if not grid:
        raise ValueError("power grid must be nonempty")
    if any(not math.isfinite(p) for p in grid):
        raise ValueError("power grid entries must be finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("power grid must be strictly increasing")
    return grid


class SimulateRequest(BaseModel):
    config: SystemConfigModel
    noise_dbm: float
    power_grid_dbm: list[float]
    schemes: list[str] = Field(default_factory=lambda: list(SCHEME_IDS))
    trials: int = Field(ge=1)
    seed: int = 0
    paired: bool = True
    workers: int = Field(default=1, ge=1)

    @field_validator("power_grid_dbm")
    @classmethod
    def _grid(cls, grid: list[float]) -> list[float]:
        return _check_grid(grid)

    @field_validator("schemes")
    @classmethod
    def _schemes(cls, schemes: list[str]) -> list[str]:
        if not schemes:
            raise ValueError("at least one scheme is required")
        unknown = set(schemes) - set(SCHEME_IDS)
        if unknown:
            raise ValueError(f"unknown schemes {sorted(unknown)}; valid: {list(SCHEME_IDS)}")
        if len(set(schemes)) != len(schemes):
            raise ValueError("schemes must be unique")
        return schemes


class AnalyticRequest(BaseModel):
    config: SystemConfigModel
    noise_dbm: float
    power_grid_dbm: list[float]

    @field_validator("power_grid_dbm")
    @classmethod
    def _grid(cls, grid: list[float]) -> list[float]:
        return _check_grid(grid)


class Table1Request(BaseModel):
    config: SystemConfigModel
    noise_dbm: float
    trials: int = Field(ge=1)
    seed: int = 0
    workers: int = Field(default=1, ge=1)


class EstimateRow(BaseModel):
    scheme: str
    power_dbm: float
    rho: float
    p_outage: float
    ci95: float
    # None encodes a linear mean of zero (dB value of -infinity), which JSON
    # cannot carry as a float.
    mean_gamma_s_db: Optional[float]
    mean_b: float
    trials: int


class AnalyticRow(BaseModel):
    power_dbm: float
    rho: float
    p_outage_asymptotic: float
    p_outage_asymptotic_raw: float
    p_outage_highsnr: float
    regime_flag: bool
    diversity: int


class Table1Row(BaseModel):
    scheme: str
    mean_b: list[float]


class SimulateResponse(BaseModel):
    manifest: dict[str, object]
    rows: list[EstimateRow]


class AnalyticResponse(BaseModel):
    manifest: dict[str, object]
    rows: list[AnalyticRow]


class Table1Response(BaseModel):
    manifest: dict[str, object]
    power_grid_dbm: list[float]
    rows: list[Table1Row]


class HealthResponse(BaseModel):
    status: str
    tool_version: str

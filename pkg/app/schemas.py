# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.


from pydantic import BaseModel, Field
from typing import Any, Dict, List, Literal, Optional
from datetime import datetime

from . import config

ModeName = Literal["gram-schmidt", "lanczos"]


class RunManifest(BaseModel):
    command: str
    version: str = config.APP_VERSION
    timestamp: datetime
    config: Dict[str, Any]
    files: Dict[str, str]  # file name -> sha256


class ModeOptions(BaseModel):
    mode: ModeName = "lanczos"
    reorthogonalize_every: Optional[int] = Field(default=5, ge=1)
    window: Optional[int] = Field(default=config.REORTH_WINDOW, ge=1)


class DistanceRequest(ModeOptions):
    c: float = Field(ge=0)
    seed: int = 1
    realization: int = Field(default=0, ge=0)
    n: int = Field(ge=1)
    gamma_min: float = Field(default=0.10, gt=0)
    gamma_max: float = Field(default=2.00, gt=0)
    gamma_step: float = Field(default=0.05, gt=0)
    tail_start: Optional[int] = Field(default=None, ge=0)


class TermOut(BaseModel):
    k: int
    bessel_term: float
    partial_sum: float
    distance: float


class FitOut(BaseModel):
    gamma: float
    intercept_y: float
    sse: float
    l_lower: float
    tail_start: int


class DistanceResponse(BaseModel):
    c: float
    seed: int
    realization: int
    mode: str
    breakdown: bool
    breakdown_step: Optional[int] = None
    drift: float
    terms: List[TermOut]
    fit: Optional[FitOut] = None


class EnergyRequest(ModeOptions):
    c: float = Field(ge=0)
    seed: int = 1
    realization: int = Field(default=0, ge=0)
    k: int = Field(ge=0)


class ShellOut(BaseModel):
    s: int
    energy: float
    cumulative_fraction: float


class EnergyResponse(BaseModel):
    c: float
    k: int
    total: float
    log_norm_sq: float
    normalized: bool
    peak_shell: int
    outermost_fraction: float
    shells: List[ShellOut]


class VerifyRequest(BaseModel):
    n: int = Field(default=25, ge=1, le=30)
    c_values: List[float] = Field(default_factory=lambda: [0.0, 0.5, 2.0])
    seeds: int = Field(default=5, ge=1)
    tolerance: float = Field(default=1e-9, gt=0)


class VerifyCase(BaseModel):
    c: float
    seed: int
    max_discrepancy: float
    passed: bool


class VerifyResponse(BaseModel):
    passed: bool
    cases: List[VerifyCase]

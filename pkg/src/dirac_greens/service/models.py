"""Pydantic request/response models of the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..constants import SPEED_OF_LIGHT_AU


class HealthResponse(BaseModel):
    status: str
    version: str


class GridSpec(BaseModel):
    """Exponential radial grid parameters."""

    rnt: float = Field(default=2.177968408335618e-4, gt=0)
    h: float = Field(default=0.0625, gt=0)
    n: int = Field(default=390, ge=10)


class PotentialCreate(BaseModel):
    model: Literal["coulomb", "tabulated"]
    zeff: Optional[float] = None
    r: Optional[list[float]] = None
    z: Optional[list[float]] = None


class PotentialInfo(BaseModel):
    id: str
    model: str
    z_origin: float
    z_tail: float
    r_last: Optional[float] = None


class GreensBuildRequest(BaseModel):
    potential_id: str
    energy: float
    unit: Literal["eV", "Hartree"] = "eV"
    symmetry: Optional[str] = None
    kappa: Optional[int] = None
    grid: GridSpec = GridSpec()
    clight: float = SPEED_OF_LIGHT_AU


class GreensInfo(BaseModel):
    id: str
    potential_id: str
    energy_au: float
    kappa: int
    symmetry: str
    mtp: int
    r_max: float
    wronskian_rel_spread: float


class ComponentsResponse(BaseModel):
    r: float
    rp: float
    gll: float
    gls: float
    gsl: float
    gss: float


class OrbitalSolveRequest(BaseModel):
    potential_id: str
    n: int = Field(ge=1)
    symmetry: Optional[str] = None
    kappa: Optional[int] = None
    grid: GridSpec = GridSpec()
    clight: float = SPEED_OF_LIGHT_AU


class OrbitalInfo(BaseModel):
    n: int
    kappa: int
    symmetry: str
    energy_au: float
    nodes: int


class OrbitalCheckRow(BaseModel):
    n: int
    kappa: int
    label: str
    overlap: float
    normalization: float


class CheckResponse(BaseModel):
    greens_id: str
    rows: list[OrbitalCheckRow]
    jump_max_rel_dev: float
    wronskian_rel_spread: float


class OrbitalSelector(BaseModel):
    n: int = Field(ge=1)
    symmetry: Optional[str] = None
    kappa: Optional[int] = None


class MatrixElementRequest(BaseModel):
    beta: OrbitalSelector
    alpha: OrbitalSelector
    k: float = 0.0
    ktilde: float = 0.0
    lam: int = Field(default=0, ge=0, le=20)
    lam_tilde: int = Field(default=0, ge=0, le=20)
    tbeta: Literal["L", "S"] = "L"
    t: Literal["L", "S"] = "L"
    ttilde: Literal["L", "S"] = "L"
    talpha: Literal["L", "S"] = "L"


class MatrixElementResponse(BaseModel):
    value: float


class RgfRequest(BaseModel):
    greens_ids: list[str] = Field(min_length=1)

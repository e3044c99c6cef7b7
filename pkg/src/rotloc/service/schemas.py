"""Pydantic request/response models of the service wire format.

The JSON schema is versioned by a top-level ``schema: 1`` field and the CSV
columns of the sweep are fixed, so downstream plotting scripts can rely on
them.  Every report carries the convention flags in effect (matrix
representation, Y-sign, co-rotation sense, branch) and tolerance metadata.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1


class _Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")


class Quantity(BaseModel):
    value: float
    unit: str


class ComplexValue(BaseModel):
    re: float
    im: float


class Conventions(BaseModel):
    matrix_representation: str
    y_convention: str
    corotating_sense: str
    polarization: str
    branch: int | None = None


class ToleranceInfo(BaseModel):
    rel_tol: float | None = None
    achieved_rel: float | None = None
    panels: int | None = None


# --------------------------------------------------------------------------
# requests
# --------------------------------------------------------------------------

class NormalizeRequest(BaseModel):
    """Physical inputs (CGS-Gaussian): rad/s, gauss, grams."""

    omega: float = Field(gt=0)
    h_z: float
    h_wave: float = Field(ge=0)
    mass: float = Field(default=9.1093837015e-28, gt=0)
    charge_sign: Literal[-1, 1] = -1
    branch: Literal[-1, 1] = 1


class RootsRequest(BaseModel):
    e0: float = Field(gt=0)
    h: float = Field(default=0.0, ge=0)
    b: float = 0.0
    singular_b_tol: float = Field(default=1e-9, gt=0)


class LocalizeLabRequest(BaseModel):
    e0: float = Field(gt=0)
    omega_n: float = Field(default=0.01, gt=0)
    h: float = Field(default=0.01, ge=0)
    branch: Literal[-1, 1] = 1
    rel_tol: float = Field(default=1e-10, ge=1e-13, le=1e-3)


class LocalizeRotRequest(BaseModel):
    kappa: float = Field(gt=0)
    e0: float = Field(gt=0)
    branch: Literal[-1, 1] = 1
    rel_tol: float = Field(default=1e-12, ge=1e-13, le=1e-3)
    y_convention: Literal["decaying", "growing"] = "decaying"
    omega: float | None = Field(default=None, gt=0,
                                description="physical rad/s for cm output")


class SweepRequest(BaseModel):
    kappa_from: float = Field(gt=0)
    kappa_to: float = Field(gt=0)
    points: int = Field(ge=2, le=10000)
    e0: float = Field(gt=0)
    branch: Literal[-1, 1] = 1
    rel_tol: float = Field(default=1e-12, ge=1e-13, le=1e-3)


class VerifyDiracRequest(BaseModel):
    e0: float = Field(gt=0)
    h: float = Field(default=0.01, ge=0)
    omega_n: float = Field(default=0.01, gt=0)
    branches: list[Literal[-1, 1]] = [1, -1]
    n_points: int = Field(default=100, ge=1, le=100000)
    seed: int = 12345


class VerifyOdeRequest(BaseModel):
    kappas: list[float] = [0.5, 2.0, 10.0, 50.0]
    e0s: list[float] = [0.5, 1.0, 2.0, 5.0]
    branches: list[Literal[-1, 1]] = [1, -1]
    fd_step: float = Field(default=1e-4, gt=0)
    rel_tol: float = Field(default=1e-12, ge=1e-13, le=1e-3)
    y_convention: Literal["decaying", "growing"] = "decaying"


class VerifyTransformRequest(BaseModel):
    n_events: int = Field(default=10000, ge=1, le=10_000_000)
    seed: int = 0
    omega_n: float = Field(default=1.0, gt=0)
    boundary_gap: float = Field(default=1e-6, gt=0,
                                description="events satisfy r^2 Omega^2 <= 1 - gap")
    fd_scale: float = Field(default=1.0, gt=0)


class EventIn(BaseModel):
    r: float = Field(ge=0)
    phi: float
    z: float
    t: float


class TransformRequest(BaseModel):
    omega_n: float
    events: list[EventIn]
    direction: Literal["to_rotating", "from_rotating"] = "to_rotating"


class WavefunctionRequest(BaseModel):
    e0: float = Field(gt=0)
    h: float = Field(default=0.01, ge=0)
    omega_n: float = Field(default=0.01, gt=0)
    branch: Literal[-1, 1] = 1
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    t: float = 0.0


# --------------------------------------------------------------------------
# responses
# --------------------------------------------------------------------------

class HealthResponse(_Report):
    status: str
    version: str
    conventions: Conventions


class NormalizeResponse(_Report):
    conventions: Conventions
    omega_n: Quantity
    e0: Quantity
    h: Quantity
    d: Quantity
    d2: Quantity
    p: Quantity
    energy: Quantity
    kappa: Quantity
    h_large: bool


class RootsResponse(_Report):
    conventions: Conventions
    roots: list[ComplexValue]
    classification: str
    pair_slope: float | None
    residuals: list[float]
    warnings: list[str]
    tolerances: ToleranceInfo


class LocalizeLabResponse(_Report):
    conventions: Conventions
    closed_form: Quantity
    numeric: Quantity
    numeric_compton: Quantity
    moment_compton: Quantity
    rel_moment_mismatch: float
    tolerances: ToleranceInfo


class LocalizeRotResponse(_Report):
    conventions: Conventions
    kappa: float
    e0: float
    lab_rms: Quantity
    lab_moment: Quantity
    rot_rms: Quantity
    rot_rms_compton: Quantity
    ratio_rot_over_bound: Quantity
    lab_over_rot: Quantity
    physical: dict[str, float] | None
    tolerances: ToleranceInfo
    warnings: list[str]


class SweepRow(BaseModel):
    kappa: float
    e0: float
    branch: int
    eta_log: float
    sigma_log: float
    xi_log: float
    rot_rms_over_bound: float


class SweepResponse(_Report):
    conventions: Conventions
    rows: list[SweepRow]
    tolerances: ToleranceInfo


class ConventionResidual(BaseModel):
    convention: str
    max_residual: float


class BranchDiracReport(BaseModel):
    branch: int
    e_root: float
    residuals: list[ConventionResidual]
    selected_convention: str
    selected_residual: float
    achieves_1e_minus_10: bool


class VerifyDiracResponse(_Report):
    conventions: Conventions
    e0: float
    h: float
    omega_n: float
    n_points: int
    seed: int
    reports: list[BranchDiracReport]
    max_selected_residual: float


class OdeGridPoint(BaseModel):
    kappa: float
    e0: float
    branch: int
    res_sigma: float
    res_xi: float
    res_eta: float
    warnings: list[str]


class VerifyOdeResponse(_Report):
    conventions: Conventions
    fd_step: float
    grid: list[OdeGridPoint]
    max_residual: float


class VerifyTransformResponse(_Report):
    conventions: Conventions
    n_events: int
    seed: int
    omega_n: float
    boundary_gap: float
    max_abs_det_minus_one_analytic: float
    max_abs_det_minus_one_fd: float


class EventOut(BaseModel):
    r: float
    phi: float
    z: float
    t: float
    jacobian_det: float


class TransformResponse(_Report):
    conventions: Conventions
    direction: str
    omega_n: float
    max_radius_compton: Quantity
    events: list[EventOut]


class WavefunctionResponse(_Report):
    conventions: Conventions
    e_root: float
    components: list[ComplexValue]
    density: float
    residual: float
    point: dict[str, float]

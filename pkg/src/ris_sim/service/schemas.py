"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..config import ScenarioConfig


class HealthResponse(BaseModel):
    status: str
    version: str


class ValidateRequest(BaseModel):
    config: dict = Field(default_factory=dict)


class ValidateResponse(BaseModel):
    config: ScenarioConfig
    digest: str


class PatternRequest(BaseModel):
    rows: int = Field(16, ge=1)
    cols: int = Field(16, ge=1)
    spacing_h_wl: float = Field(0.5, gt=0.0)
    spacing_v_wl: float = Field(0.8, gt=0.0)
    frequency_hz: float = Field(2.6e9, gt=0.0)
    incidence_zenith_deg: float = 90.0
    incidence_azimuth_deg: float = 30.0
    target_zenith_deg: float = 90.0
    target_azimuth_deg: float | None = None
    quantization_bits: int = Field(0, ge=0, le=3)
    step_deg: float = Field(0.5, gt=0.0)


class PatternResponse(BaseModel):
    out_zenith_deg: float
    out_azimuth_deg: list[float]
    gain_db: list[float]
    gain_rel_db: list[float]
    peak_azimuth_deg: float
    peak_gain_db: float


class CampaignRequest(BaseModel):
    config: ScenarioConfig = Field(default_factory=ScenarioConfig)
    drops: int | None = Field(None, ge=1)
    seed: int | None = Field(None, ge=0)
    include_records: bool = False


class CdfData(BaseModel):
    values: list[float]
    probabilities: list[float]


class RecordRow(BaseModel):
    drop_index: int
    ue_index: int
    serving_sector: int
    serving_ris: int | None
    signal_w: float
    ris_signal_w: float
    interference_direct_w: float
    interference_neighbor_ris_w: float
    interference_own_ris_w: float
    noise_w: float
    sinr_db: float
    rx_power_dbm: float


class CampaignResponse(BaseModel):
    config_digest: str
    master_seed: int
    duration_s: float
    num_records: int
    percentiles: dict[str, dict[str, float]]
    cdf_rx_power: CdfData
    cdf_sinr: CdfData
    records: list[RecordRow] | None = None

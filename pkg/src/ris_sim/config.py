"""User-facing configuration: schema, defaults, file parsing, and digests.

Config files are YAML (JSON is a subset) with nested sections.  Every key is
optional; omitted keys take the defaults below, which reproduce the standard
macro deployment (7 sites / 21 sectors at 500 m ISD, 2.6 GHz, heights
25/15/1.5 m, panel spacings 0.5/0.8 wavelengths, downtilts 0/10 degrees,
single polarization).  Unknown keys are rejected with their key path.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from typing import Literal

from .errors import InvalidConfigError
from .geometry import ScenarioKind


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class LayoutConfig(_StrictModel):
    isd_m: float = Field(500.0, gt=0.0)
    bs_height_m: float = Field(25.0, gt=0.0)
    ris_height_m: float = Field(15.0, gt=0.0)
    ue_height_m: float = Field(1.5, gt=0.0)
    bs_downtilt_deg: float = Field(0.0, ge=-90.0, le=90.0)
    ris_downtilt_deg: float = Field(10.0, ge=-90.0, le=90.0)
    min_bs_ue_distance_m: float = Field(35.0, gt=0.0)


class PanelConfig(_StrictModel):
    per_sector: int = Field(8, ge=0)
    rows: int = Field(16, ge=1)
    cols: int = Field(16, ge=1)
    spacing_h_wl: float = Field(0.5, gt=0.0)
    spacing_v_wl: float = Field(0.8, gt=0.0)
    quantization_bits: int = Field(0, ge=0, le=3)
    element_rolloff: bool = True


class CarrierSettings(_StrictModel):
    frequency_hz: float = Field(2.6e9, gt=0.0)
    tx_power_dbm: float = 46.0
    bandwidth_hz: float = Field(100e6, gt=0.0)
    noise_figure_db: float = Field(9.0, ge=0.0)


class PropagationConfig(_StrictModel):
    shadow_sigma_db: float = Field(4.0, ge=0.0)
    direct_link: Literal["los", "nlos"] = "los"
    nlos_extra_loss_db: float = Field(20.0, ge=0.0)


class DropSettings(_StrictModel):
    scenario: ScenarioKind = ScenarioKind.UE_RANDOM_RIS_EDGE
    ue_per_sector: int = Field(10, ge=1)
    drops: int = Field(20, ge=1)
    seed: int = Field(1, ge=0)


class ScenarioConfig(_StrictModel):
    """Complete resolved simulation configuration."""

    layout: LayoutConfig = Field(default_factory=LayoutConfig)
    ris: PanelConfig = Field(default_factory=PanelConfig)
    carrier: CarrierSettings = Field(default_factory=CarrierSettings)
    propagation: PropagationConfig = Field(default_factory=PropagationConfig)
    drop: DropSettings = Field(default_factory=DropSettings)

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        drops: int | None = None,
        ris_per_sector: int | None = None,
    ) -> "ScenarioConfig":
        """Copy with selected fields replaced (used by CLI flags and service)."""
        cfg = self
        if seed is not None or drops is not None:
            update = {}
            if seed is not None:
                update["seed"] = int(seed)
            if drops is not None:
                update["drops"] = int(drops)
            cfg = cfg.model_copy(update={"drop": cfg.drop.model_copy(update=update)})
        if ris_per_sector is not None:
            cfg = cfg.model_copy(
                update={
                    "ris": cfg.ris.model_copy(
                        update={"per_sector": int(ris_per_sector)}
                    )
                }
            )
        return validate_config(cfg.model_dump(mode="json"))


def _format_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def validate_config(data: dict) -> ScenarioConfig:
    """Validate a nested mapping against the schema; raise with key paths."""
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise InvalidConfigError(_format_validation_error(exc)) from exc


def parse_config(path) -> ScenarioConfig:
    """Load a YAML/JSON config file.  An empty file means all defaults."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InvalidConfigError(f"cannot parse {path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise InvalidConfigError(f"{path}: top level must be a mapping")
    return validate_config(data)


def config_digest(config: ScenarioConfig) -> str:
    """Platform-stable digest of the resolved configuration."""
    payload = json.dumps(
        config.model_dump(mode="json"), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode()).hexdigest()

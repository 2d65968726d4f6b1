"""FastAPI application exposing pattern computation and campaign execution."""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import config_digest, validate_config
from ..constants import SPEED_OF_LIGHT
from ..errors import DomainError, InvalidConfigError
from ..netsim import run_campaign
from ..ris import (
    RISPanel,
    optimal_phase,
    propagation_phase,
    quantize_phase,
    scattered_pattern,
    zero_profile,
)
from .schemas import (
    CampaignRequest,
    CampaignResponse,
    CdfData,
    HealthResponse,
    PatternRequest,
    PatternResponse,
    RecordRow,
    ValidateRequest,
    ValidateResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="ris-sim",
        version=__version__,
        description=(
            "System-level simulator for RIS-assisted multi-cell networks: "
            "scattered patterns and Monte-Carlo SINR/received-power campaigns."
        ),
    )

    @app.exception_handler(InvalidConfigError)
    async def _config_error(_, exc: InvalidConfigError):
        raise HTTPException(status_code=422, detail=str(exc))

    @app.exception_handler(DomainError)
    async def _domain_error(_, exc: DomainError):
        raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/config/validate", response_model=ValidateResponse)
    def config_validate(req: ValidateRequest) -> ValidateResponse:
        cfg = validate_config(req.config)
        return ValidateResponse(config=cfg, digest=config_digest(cfg))

    @app.post("/pattern", response_model=PatternResponse)
    def pattern(req: PatternRequest) -> PatternResponse:
        wavelength = SPEED_OF_LIGHT / req.frequency_hz
        panel = RISPanel(req.rows, req.cols, req.spacing_h_wl, req.spacing_v_wl)
        if req.target_azimuth_deg is None:
            profile = zero_profile(panel)
        else:
            tilde = propagation_phase(
                panel,
                req.incidence_zenith_deg,
                req.incidence_azimuth_deg,
                req.target_zenith_deg,
                req.target_azimuth_deg,
                wavelength,
            )
            profile = optimal_phase(tilde)
        if req.quantization_bits:
            profile = quantize_phase(profile, req.quantization_bits)
        pat = scattered_pattern(
            panel,
            req.incidence_zenith_deg,
            req.incidence_azimuth_deg,
            profile,
            req.step_deg,
            wavelength,
        )
        return PatternResponse(
            out_zenith_deg=pat.out_zenith_deg,
            out_azimuth_deg=pat.out_azimuth_deg.tolist(),
            gain_db=pat.gain_db.tolist(),
            gain_rel_db=pat.gain_rel_db.tolist(),
            peak_azimuth_deg=pat.peak_azimuth_deg,
            peak_gain_db=pat.peak_gain_db,
        )

    @app.post("/campaign", response_model=CampaignResponse)
    def campaign(req: CampaignRequest) -> CampaignResponse:
        cfg = req.config.with_overrides(seed=req.seed, drops=req.drops)
        result = run_campaign(cfg)
        records = None
        if req.include_records:
            records = [RecordRow(**asdict(rec)) for rec in result.records]
        return CampaignResponse(
            config_digest=config_digest(cfg),
            master_seed=result.master_seed,
            duration_s=result.duration_s,
            num_records=len(result.records),
            percentiles=result.percentiles,
            cdf_rx_power=CdfData(
                values=result.cdf_rx_power.values.tolist(),
                probabilities=result.cdf_rx_power.probabilities.tolist(),
            ),
            cdf_sinr=CdfData(
                values=result.cdf_sinr.values.tolist(),
                probabilities=result.cdf_sinr.probabilities.tolist(),
            ),
            records=records,
        )

    return app


app = create_app()

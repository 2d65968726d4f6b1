"""Element radiation patterns and transmit-port virtualization.

The element power pattern is the parabolic vertical/horizontal-cut model with
side-lobe floors that macro-cell system simulators conventionally use.  It
peaks on boresight (zenith 90, azimuth 0 in the element's local frame).
Reflecting-surface elements reuse the same angular shape capped at 0 dBi;
an isotropic variant is available through ``angular_rolloff=False``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidConfigError
from .geometry import spherical_unit_vector


@dataclass(frozen=True)
class ElementPatternParams:
    """Parameters of a single radiating/reflecting element."""

    theta_3db_deg: float = 65.0
    phi_3db_deg: float = 65.0
    sla_v_db: float = 30.0
    a_max_db: float = 30.0
    g_e_max_dbi: float = 8.0
    angular_rolloff: bool = True

    def __post_init__(self):
        if self.theta_3db_deg <= 0.0 or self.phi_3db_deg <= 0.0:
            raise InvalidConfigError("3 dB beamwidths must be positive")
        if self.sla_v_db < 0.0 or self.a_max_db < 0.0:
            raise InvalidConfigError("attenuation floors must be non-negative")


BS_ELEMENT = ElementPatternParams(g_e_max_dbi=8.0)
RIS_ELEMENT = ElementPatternParams(g_e_max_dbi=0.0)
UE_ELEMENT = ElementPatternParams(g_e_max_dbi=0.0, angular_rolloff=False)


def _check_angles(zenith_deg, azimuth_deg) -> tuple[np.ndarray, np.ndarray]:
    zen = np.asarray(zenith_deg, dtype=float)
    az = np.asarray(azimuth_deg, dtype=float)
    if np.any(zen < 0.0) or np.any(zen > 180.0):
        raise DomainError("zenith angle outside [0, 180] degrees")
    if np.any(az < -180.0) or np.any(az > 180.0):
        raise DomainError("azimuth angle outside [-180, 180] degrees")
    return zen, az


def element_attenuation_db(zenith_deg, azimuth_deg, params: ElementPatternParams):
    """Pattern attenuation A(theta, phi) in dB, always within [-a_max, 0].

    Vertical cut: -min(12 ((theta-90)/theta_3dB)^2, SLA_V); horizontal cut:
    -min(12 (phi/phi_3dB)^2, A_max); combined with the overall A_max floor.
    """
    zen, az = _check_angles(zenith_deg, azimuth_deg)
    if not params.angular_rolloff:
        return np.zeros(np.broadcast(zen, az).shape)
    a_v = -np.minimum(
        12.0 * ((zen - 90.0) / params.theta_3db_deg) ** 2, params.sla_v_db
    )
    a_h = -np.minimum(12.0 * (az / params.phi_3db_deg) ** 2, params.a_max_db)
    return -np.minimum(-(a_v + a_h), params.a_max_db)


def element_field_amplitude(zenith_deg, azimuth_deg, params: ElementPatternParams):
    """Field amplitude sqrt(10^((G_max + A)/10)); its square is the linear gain."""
    att = element_attenuation_db(zenith_deg, azimuth_deg, params)
    return np.sqrt(10.0 ** ((params.g_e_max_dbi + att) / 10.0))


@dataclass(frozen=True)
class FieldPattern:
    """Complex field amplitudes in the two polarizations.

    Single-polarization elements put everything in f_theta and leave f_phi 0.
    """

    f_theta: complex
    f_phi: complex = 0j

    @property
    def power_gain(self) -> float:
        return abs(self.f_theta) ** 2 + abs(self.f_phi) ** 2


def field_pattern(
    zenith_deg: float, azimuth_deg: float, params: ElementPatternParams
) -> FieldPattern:
    """Single-element field pattern (vertical polarization only)."""
    amp = element_field_amplitude(zenith_deg, azimuth_deg, params)
    return FieldPattern(complex(amp), 0j)


@dataclass(frozen=True)
class BSPortConfig:
    """One logical transmit port formed from S physical elements.

    element_positions are metres in the BS local frame; weights must carry
    unit total power (sum |w|^2 = 1).
    """

    element_positions: np.ndarray
    weights: np.ndarray
    element_params: ElementPatternParams = BS_ELEMENT

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.element_positions, dtype=float))
        w = np.asarray(self.weights, dtype=complex).ravel()
        if pos.shape != (w.size, 3):
            raise InvalidConfigError(
                "weights and element positions must agree in length"
            )
        if abs(float(np.sum(np.abs(w) ** 2)) - 1.0) > 1e-6:
            raise InvalidConfigError("virtualization weights must have unit power")
        object.__setattr__(self, "element_positions", pos)
        object.__setattr__(self, "weights", w)

    @property
    def num_elements(self) -> int:
        return self.weights.size


def single_port(params: ElementPatternParams = BS_ELEMENT) -> BSPortConfig:
    """Degenerate one-element port (the default BS configuration)."""
    return BSPortConfig(np.zeros((1, 3)), np.ones(1), params)


def bs_port_pattern(
    zod_deg: float, aod_deg: float, config: BSPortConfig, wavelength_m: float
) -> FieldPattern:
    """Virtualized port pattern: weighted element sum with steering phases.

    With S=1 and w=[1] this reduces exactly to the single-element pattern.
    """
    r_hat = spherical_unit_vector(zod_deg, aod_deg)
    phases = 2.0 * np.pi * (config.element_positions @ r_hat) / wavelength_m
    amp = element_field_amplitude(zod_deg, aod_deg, config.element_params)
    f_theta = complex(np.sum(config.weights * np.exp(1j * phases)) * amp)
    return FieldPattern(f_theta, 0j)


def bs_port_power_gain(zenith_deg, azimuth_deg, config: BSPortConfig, wavelength_m):
    """|port pattern|^2, vectorized over angle arrays."""
    r_hat = spherical_unit_vector(zenith_deg, azimuth_deg)
    phases = 2.0 * np.pi * (r_hat @ config.element_positions.T) / wavelength_m
    steer = np.exp(1j * phases) @ config.weights
    amp = element_field_amplitude(zenith_deg, azimuth_deg, config.element_params)
    return np.abs(steer * amp) ** 2


def pattern_grid(params: ElementPatternParams, step_deg: float) -> np.ndarray:
    """(zenith_deg, azimuth_deg, gain_db) rows over the sphere, for plotting."""
    if step_deg <= 0.0:
        raise InvalidConfigError("grid step must be positive")
    zen = np.arange(0.0, 180.0 + step_deg / 2.0, step_deg)
    az = np.arange(-180.0, 180.0 + step_deg / 2.0, step_deg)
    zz, aa = np.meshgrid(zen, az, indexing="ij")
    gain = params.g_e_max_dbi + element_attenuation_db(zz, aa, params)
    return np.column_stack([zz.ravel(), aa.ravel(), gain.ravel()])

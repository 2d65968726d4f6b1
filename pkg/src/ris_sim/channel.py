"""Large-scale link budget and the cascaded two-hop received power.

Pathloss and shadow fading enter the received-power products as linear
attenuation factors (a positive shadow sample in dB means extra loss).  The
dual-slope urban-macro LOS pathloss is used on every hop; the direct BS-UE
link can optionally carry a fixed extra loss to emulate an obstructed
baseline.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .antenna import (
    BSPortConfig,
    UE_ELEMENT,
    ElementPatternParams,
    bs_port_pattern,
    element_field_amplitude,
    single_port,
)
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, InvalidConfigError
from .geometry import (
    NodeKinematics,
    is_front_hemisphere,
    link_angles,
    spherical_unit_vector,
)
from .ris import PhaseProfile, RISPanel, element_positions, propagation_phase


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def dbm_to_watts(dbm) -> float:
    return float(10.0 ** ((dbm - 30.0) / 10.0))


def watts_to_dbm(watts):
    return 10.0 * np.log10(np.asarray(watts, dtype=float) * 1e3)


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier and radio parameters shared by every link of a run."""

    frequency_hz: float = 2.6e9
    tx_power_w: float = dbm_to_watts(46.0)
    bandwidth_hz: float = 100e6
    noise_figure_db: float = 9.0

    def __post_init__(self):
        if self.frequency_hz <= 0.0:
            raise InvalidConfigError("carrier frequency must be positive")
        if self.tx_power_w <= 0.0:
            raise InvalidConfigError("transmit power must be positive")
        if self.bandwidth_hz <= 0.0:
            raise InvalidConfigError("bandwidth must be positive")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz


def noise_power_w(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power: -174 dBm/Hz plus bandwidth and noise figure."""
    if bandwidth_hz <= 0.0:
        raise InvalidConfigError("bandwidth must be positive")
    dbm = -174.0 + 10.0 * np.log10(bandwidth_hz) + noise_figure_db
    return dbm_to_watts(dbm)


def breakpoint_distance_m(h_bs_m: float, h_ue_m: float, frequency_hz: float) -> float:
    """Dual-slope breakpoint; effective antenna heights sit 1 m below physical."""
    return 4.0 * (h_bs_m - 1.0) * (h_ue_m - 1.0) * frequency_hz / SPEED_OF_LIGHT


def _pathloss_dual_slope(d3d, d2d, frequency_hz, h_bs_m, h_ue_m):
    fc_ghz = frequency_hz / 1e9
    d_bp = breakpoint_distance_m(h_bs_m, h_ue_m, frequency_hz)
    near = 28.0 + 22.0 * np.log10(d3d) + 20.0 * np.log10(fc_ghz)
    far = (
        28.0
        + 40.0 * np.log10(d3d)
        + 20.0 * np.log10(fc_ghz)
        - 9.0 * np.log10(d_bp**2 + (h_bs_m - h_ue_m) ** 2)
    )
    return np.where(d2d <= d_bp, near, far)


def pathloss_uma_los_db(d3d_m, frequency_hz: float, h_bs_m: float, h_ue_m: float):
    """Urban-macro LOS pathloss in dB; valid for 2D distances 10 m .. 5 km."""
    d3d = np.asarray(d3d_m, dtype=float)
    dz = h_bs_m - h_ue_m
    d2d_sq = d3d**2 - dz**2
    if np.any(d2d_sq < 0.0):
        raise DomainError("3D distance shorter than the height difference")
    d2d = np.sqrt(d2d_sq)
    if np.any(d2d < 10.0) or np.any(d2d > 5000.0):
        raise DomainError("2D distance outside the 10 m .. 5 km validity range")
    return _pathloss_dual_slope(d3d, d2d, frequency_hz, h_bs_m, h_ue_m)


def clamped_pathloss_db(d2d_m, h_a_m: float, h_b_m: float, frequency_hz: float):
    """Pathloss from horizontal separation and endpoint heights.

    Separations below the 10 m validity floor are clamped to it, which keeps
    drops with users directly underneath a panel well defined.
    """
    d2d = np.maximum(np.asarray(d2d_m, dtype=float), 10.0)
    d3d = np.hypot(d2d, h_a_m - h_b_m)
    return _pathloss_dual_slope(d3d, d2d, frequency_hz, h_a_m, h_b_m)


def _link_entropy(link_id) -> int:
    parts = tuple(link_id) if isinstance(link_id, (tuple, list)) else (link_id,)
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def shadow_fading_db(link_id, sigma_db: float, seed: int) -> float:
    """Deterministic zero-mean Gaussian shadow sample in dB for one link.

    The same (link_id, seed) always yields the same value; distinct links get
    independent draws.
    """
    if sigma_db < 0.0:
        raise InvalidConfigError("shadow-fading sigma must be non-negative")
    if sigma_db == 0.0:
        return 0.0
    rng = np.random.default_rng(
        np.random.SeedSequence([int(seed), _link_entropy(link_id)])
    )
    return float(rng.normal(0.0, sigma_db))


@dataclass(frozen=True)
class LinkLargeScale:
    """Large-scale state of one hop."""

    pathloss_db: float
    shadow_db: float = 0.0
    visible: bool = True

    @property
    def attenuation_linear(self) -> float:
        """Linear power factor; positive shadow samples attenuate."""
        if not self.visible:
            return 0.0
        return float(10.0 ** (-(self.pathloss_db + self.shadow_db) / 10.0))


@dataclass(frozen=True)
class CascadeCoefficient:
    """Complex per-element coefficient of one cascade hop."""

    value: complex
    visible: bool = True


# The single-polarization coupling [F_t, F_p] [[1,0],[0,-1]] [F_t', F_p']^T
# collapses to F_t * F_t' because every F_p here is zero.


def cascade_alpha1(
    bs: NodeKinematics,
    panel: RISPanel,
    element_index: int,
    wavelength_m: float,
    bs_port: BSPortConfig | None = None,
) -> CascadeCoefficient:
    """BS-to-panel hop coefficient for one reflecting element.

    Zero (visible=False) when the hop direction falls behind either the BS
    sector or the panel plane.
    """
    port = bs_port if bs_port is not None else single_port()
    ang = link_angles(bs, panel.kinematics)
    if not (
        is_front_hemisphere(ang.zod_deg, ang.aod_deg)
        and is_front_hemisphere(ang.zoa_deg, ang.aoa_deg)
    ):
        return CascadeCoefficient(0j, visible=False)
    f_bs = bs_port_pattern(ang.zod_deg, ang.aod_deg, port, wavelength_m).f_theta
    f_ris = element_field_amplitude(ang.zoa_deg, ang.aoa_deg, panel.element_params)
    pos = element_positions(panel, wavelength_m)[element_index]
    r_arr = spherical_unit_vector(ang.zoa_deg, ang.aoa_deg)
    phase = 2.0 * np.pi * float(r_arr @ pos) / wavelength_m
    return CascadeCoefficient(float(f_ris) * f_bs * np.exp(1j * phase))


def cascade_alpha2(
    panel: RISPanel,
    element_index: int,
    ue: NodeKinematics,
    wavelength_m: float,
    ue_params: ElementPatternParams = UE_ELEMENT,
) -> CascadeCoefficient:
    """Panel-to-UE hop coefficient for one reflecting element."""
    ang = link_angles(panel.kinematics, ue)
    if not is_front_hemisphere(ang.zod_deg, ang.aod_deg):
        return CascadeCoefficient(0j, visible=False)
    f_ris = element_field_amplitude(ang.zod_deg, ang.aod_deg, panel.element_params)
    f_ue = element_field_amplitude(ang.zoa_deg, ang.aoa_deg, ue_params)
    pos = element_positions(panel, wavelength_m)[element_index]
    r_dep = spherical_unit_vector(ang.zod_deg, ang.aod_deg)
    phase = 2.0 * np.pi * float(r_dep @ pos) / wavelength_m
    return CascadeCoefficient(float(f_ue * f_ris) * np.exp(1j * phase))


def ris_path_power(
    bs: NodeKinematics,
    panel: RISPanel,
    ue: NodeKinematics,
    profile: PhaseProfile,
    hop1: LinkLargeScale,
    hop2: LinkLargeScale,
    carrier: CarrierConfig,
    bs_port: BSPortConfig | None = None,
    ue_params: ElementPatternParams = UE_ELEMENT,
    u_count: int = 1,
) -> float:
    """Received power (watts) through one panel's two-hop path.

    Evaluates PL1 PL2 SF1 SF2 sum_u |sum_k a2 e^{j Phi} a1|^2 TX/U with the
    pattern amplitudes factored out of the element sum (they are common to
    all elements in the far field).  Colocated omnidirectional UE elements
    make the result independent of u_count.  Returns 0 when either hop is
    hidden from the panel or the BS sector.
    """
    if u_count < 1:
        raise InvalidConfigError("UE element count must be >= 1")
    if not (hop1.visible and hop2.visible):
        return 0.0
    port = bs_port if bs_port is not None else single_port()
    lam = carrier.wavelength_m
    ang1 = link_angles(bs, panel.kinematics)
    ang2 = link_angles(panel.kinematics, ue)
    if not (
        is_front_hemisphere(ang1.zod_deg, ang1.aod_deg)
        and is_front_hemisphere(ang1.zoa_deg, ang1.aoa_deg)
        and is_front_hemisphere(ang2.zod_deg, ang2.aod_deg)
    ):
        return 0.0

    tilde = propagation_phase(
        panel, ang1.zoa_deg, ang1.aoa_deg, ang2.zod_deg, ang2.aod_deg, lam
    )
    if profile.phases.size != tilde.size:
        raise InvalidConfigError("profile length does not match element count")
    coherent = np.exp(1j * (tilde + profile.phases)).sum()

    f_bs = bs_port_pattern(ang1.zod_deg, ang1.aod_deg, port, lam).f_theta
    f_in = element_field_amplitude(ang1.zoa_deg, ang1.aoa_deg, panel.element_params)
    f_out = element_field_amplitude(ang2.zod_deg, ang2.aod_deg, panel.element_params)
    f_ue = element_field_amplitude(ang2.zoa_deg, ang2.aoa_deg, ue_params)
    inner = f_ue * f_out * coherent * f_in * f_bs

    return (
        hop1.attenuation_linear
        * hop2.attenuation_linear
        * abs(inner) ** 2
        * carrier.tx_power_w
    )


def direct_path_power(
    bs: NodeKinematics,
    ue: NodeKinematics,
    link: LinkLargeScale,
    carrier: CarrierConfig,
    bs_port: BSPortConfig | None = None,
    ue_params: ElementPatternParams = UE_ELEMENT,
    min_2d_distance_m: float = 35.0,
) -> float:
    """Received power (watts) of the direct BS-UE path."""
    port = bs_port if bs_port is not None else single_port()
    d2d = float(np.hypot(*(ue.position[:2] - bs.position[:2])))
    if d2d < min_2d_distance_m:
        raise DomainError(
            f"BS-UE 2D distance {d2d:.1f} m below the {min_2d_distance_m} m minimum"
        )
    ang = link_angles(bs, ue)
    g_bs = bs_port_pattern(
        ang.zod_deg, ang.aod_deg, port, carrier.wavelength_m
    ).power_gain
    g_ue = float(
        element_field_amplitude(ang.zoa_deg, ang.aoa_deg, ue_params) ** 2
    )
    return carrier.tx_power_w * link.attenuation_linear * g_bs * g_ue

"""Reflecting-panel geometry, phase profiles, quantization, and far-field
scattered patterns.

Panel-local axes follow the package convention: +x is the outward boresight
normal, +y the horizontal element axis, +z the vertical one, so element
positions have zero x component.  Element reflection amplitude is fixed at 1;
a profile carries phases only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .antenna import RIS_ELEMENT, ElementPatternParams, element_field_amplitude
from .errors import DomainError, InvalidConfigError
from .geometry import NodeKinematics, spherical_unit_vector


@dataclass(frozen=True)
class RISPanel:
    """Rectangular reflecting panel; spacings are in carrier wavelengths."""

    rows: int = 16
    cols: int = 16
    dh_wavelengths: float = 0.5
    dv_wavelengths: float = 0.8
    kinematics: NodeKinematics = field(
        default_factory=lambda: NodeKinematics(np.zeros(3))
    )
    element_params: ElementPatternParams = RIS_ELEMENT

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InvalidConfigError("panel needs at least one row and one column")
        if self.dh_wavelengths <= 0.0 or self.dv_wavelengths <= 0.0:
            raise InvalidConfigError("element spacings must be positive")

    @property
    def num_elements(self) -> int:
        return self.rows * self.cols


def element_positions(panel: RISPanel, wavelength_m: float) -> np.ndarray:
    """Local element coordinates (K, 3), grid centred on the panel origin.

    Columns advance along +y with the horizontal pitch, rows along +z with
    the vertical pitch; element k = row * cols + col.
    """
    if wavelength_m <= 0.0:
        raise InvalidConfigError("wavelength must be positive")
    y = (np.arange(panel.cols) - (panel.cols - 1) / 2.0) * (
        panel.dh_wavelengths * wavelength_m
    )
    z = (np.arange(panel.rows) - (panel.rows - 1) / 2.0) * (
        panel.dv_wavelengths * wavelength_m
    )
    yy = np.tile(y, panel.rows)
    zz = np.repeat(z, panel.cols)
    return np.column_stack([np.zeros(yy.size), yy, zz])


@dataclass(frozen=True)
class PhaseProfile:
    """Per-element reflection phases in radians.

    quantization_bits records how the profile was produced: 0 for continuous,
    1/2/3 after quantize_phase.
    """

    phases: np.ndarray
    quantization_bits: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phases", np.asarray(self.phases, dtype=float))
        if self.quantization_bits not in (0, 1, 2, 3):
            raise InvalidConfigError("quantization_bits must be 0, 1, 2 or 3")

    def __len__(self) -> int:
        return self.phases.size


def zero_profile(panel: RISPanel) -> PhaseProfile:
    """All-zero phases: the panel acts as a plain specular reflector."""
    return PhaseProfile(np.zeros(panel.num_elements))


def propagation_phase(
    panel: RISPanel,
    arrival_zenith_deg: float,
    arrival_azimuth_deg: float,
    departure_zenith_deg: float,
    departure_azimuth_deg: float,
    wavelength_m: float,
) -> np.ndarray:
    """Per-element propagation phase of the two-hop path, radians.

    Both angle pairs are expressed in the panel's local frame.  The phase is
    2 pi (r_in + r_out) . d_k / lambda per element, the sum of the incident
    and outgoing steering phases.  It vanishes for every element when the
    arrival and departure directions are mirror images about the panel
    normal, which is why a zero profile reflects specularly.
    """
    r_in = spherical_unit_vector(arrival_zenith_deg, arrival_azimuth_deg)
    r_out = spherical_unit_vector(departure_zenith_deg, departure_azimuth_deg)
    pos = element_positions(panel, wavelength_m)
    return 2.0 * np.pi * (pos @ (r_in + r_out)) / wavelength_m


def optimal_phase(propagation_phases) -> PhaseProfile:
    """Element-wise negation: aligns every term of the reflected sum."""
    return PhaseProfile(-np.asarray(propagation_phases, dtype=float))


def quantize_phase(profile: PhaseProfile, bits: int) -> PhaseProfile:
    """Snap each phase to the centroid of its 2pi/2^bits bin.

    Bins start at 0 after reduction mod 2pi; for 2 bits this is exactly the
    four-branch mapping [0, pi/2) -> pi/4, [pi/2, pi) -> 3pi/4,
    [pi, 3pi/2) -> -3pi/4, [3pi/2, 2pi) -> -pi/4.
    """
    if bits not in (1, 2, 3):
        raise InvalidConfigError("supported quantizer depths: 1, 2, or 3 bits")
    delta = 2.0 * np.pi / (1 << bits)
    reduced = np.mod(profile.phases, 2.0 * np.pi)
    levels = (np.floor(reduced / delta) + 0.5) * delta
    wrapped = np.mod(levels + np.pi, 2.0 * np.pi) - np.pi
    return PhaseProfile(wrapped, bits)


def phasor_gain(propagation_phases, profile: PhaseProfile) -> complex:
    """Coherent element sum sum_k exp(j(prop_k + profile_k)).

    Its magnitude is at most K, reached exactly by the optimal profile.
    """
    prop = np.asarray(propagation_phases, dtype=float)
    if profile.phases.shape != prop.shape:
        raise InvalidConfigError("profile length does not match element count")
    return complex(np.exp(1j * (prop + profile.phases)).sum())


def line_array_factor(n: int, psi) -> np.ndarray:
    """Signed array factor of an n-element centred uniform line.

    Equals sum over the centred grid of exp(j i psi) = sin(n psi / 2) /
    sin(psi / 2); real because the grid is symmetric.  Vectorized over psi.
    """
    half = 0.5 * np.asarray(psi, dtype=float)
    den = np.sin(half)
    small = np.abs(den) < 1e-6
    safe_den = np.where(small, 1.0, den)
    ratio = np.sin(n * half) / safe_den
    # Near psi = 2 pi m the kernel approaches +/- n; use the limit there.
    limit = n * np.cos(n * half) / np.cos(half)
    return np.where(small, limit, ratio)


@dataclass(frozen=True)
class ScatterPattern:
    """In-plane scattered power pattern of a panel for one incident wave."""

    out_zenith_deg: float
    out_azimuth_deg: np.ndarray
    gain_db: np.ndarray
    gain_rel_db: np.ndarray

    @property
    def peak_azimuth_deg(self) -> float:
        return float(self.out_azimuth_deg[int(np.argmax(self.gain_db))])

    @property
    def peak_gain_db(self) -> float:
        return float(np.max(self.gain_db))

    def rows(self) -> np.ndarray:
        """(out_zenith_deg, out_azimuth_deg, gain_db) rows for CSV dumps."""
        zen = np.full_like(self.out_azimuth_deg, self.out_zenith_deg)
        return np.column_stack([zen, self.out_azimuth_deg, self.gain_db])


def scattered_pattern(
    panel: RISPanel,
    incident_zenith_deg: float,
    incident_azimuth_deg: float,
    profile: PhaseProfile,
    grid_step_deg: float,
    wavelength_m: float,
    out_zenith_deg: float = 90.0,
) -> ScatterPattern:
    """Far-field power gain over the horizontal-cut outgoing directions.

    The incident direction (pointing toward the source) must lie in the
    panel's front hemisphere.  The cut spans azimuth [-90, 90] degrees at the
    given outgoing zenith.  gain_db is the raw |sum|^2 including the element
    patterns at both ends; gain_rel_db is referenced to the pattern peak.
    """
    if grid_step_deg <= 0.0:
        raise InvalidConfigError("grid step must be positive")
    r_in = spherical_unit_vector(incident_zenith_deg, incident_azimuth_deg)
    if r_in[0] <= 0.0:
        raise DomainError("incident direction lies behind the panel")
    if profile.phases.size != panel.num_elements:
        raise InvalidConfigError("profile length does not match element count")

    az = np.arange(-90.0, 90.0 + grid_step_deg / 2.0, grid_step_deg)
    r_out = spherical_unit_vector(np.full(az.shape, out_zenith_deg), az)
    pos = element_positions(panel, wavelength_m)
    tilde = 2.0 * np.pi * ((r_in + r_out) @ pos.T) / wavelength_m
    coherent = np.exp(1j * (tilde + profile.phases)).sum(axis=1)

    f_in = element_field_amplitude(
        incident_zenith_deg, incident_azimuth_deg, panel.element_params
    )
    f_out = element_field_amplitude(
        np.full(az.shape, out_zenith_deg), az, panel.element_params
    )
    gain = (f_in * f_out) ** 2 * np.abs(coherent) ** 2
    gain_db = 10.0 * np.log10(np.maximum(gain, 1e-300))
    return ScatterPattern(
        float(out_zenith_deg), az, gain_db, gain_db - gain_db.max()
    )

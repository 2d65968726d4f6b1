"""Hexagonal multi-cell topology, node placement, and link-angle computation.

Conventions used everywhere in the package: the global frame is Cartesian
with z up.  A node's local frame is obtained by rotating the global frame by
the node's bearing about the z axis, then by its downtilt about the rotated
y axis.  The local +x axis is the antenna/panel boresight, so a reflecting
panel's elements lie in the local y-z plane.  Zenith angles are measured from
the local +z axis and azimuth angles from the local +x axis; a boresight link
therefore reads (zenith 90, azimuth 0) degrees.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, DomainError, InvalidConfigError

# Tri-sector convention: one site serves three 120-degree wedges.
SECTOR_BEARINGS_DEG = (30.0, 150.0, 270.0)
SECTOR_HALF_WIDTH_DEG = 60.0

# Radial placement bands as fractions of the cell radius (half the ISD).
EDGE_RIS_RADIUS_FACTOR = 0.9
MIDDLE_RIS_RADIUS_FACTOR = 0.5
EDGE_UE_BAND = (0.85, 1.0)


class ScenarioKind(str, enum.Enum):
    """Node placement layouts for a Monte-Carlo drop."""

    UE_RANDOM_RIS_EDGE = "ue_random_ris_edge"
    UE_EDGE_RIS_MIDDLE = "ue_edge_ris_middle"
    UE_EDGE_RIS_EDGE = "ue_edge_ris_edge"


@dataclass(frozen=True)
class Orientation:
    """Boresight direction: bearing (azimuth) and downtilt, both in degrees.

    Positive downtilt points the boresight below the horizon.  Bearings are
    normalized to [0, 360).
    """

    bearing_deg: float = 0.0
    downtilt_deg: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "bearing_deg", float(self.bearing_deg) % 360.0)
        if not -90.0 <= self.downtilt_deg <= 90.0:
            raise InvalidConfigError(
                f"downtilt {self.downtilt_deg} deg outside [-90, 90]"
            )


def rotation_matrix(orientation: Orientation) -> np.ndarray:
    """Local-to-global rotation: bearing about z, then downtilt about y'."""
    b = np.radians(orientation.bearing_deg)
    t = np.radians(orientation.downtilt_deg)
    rz = np.array(
        [[np.cos(b), -np.sin(b), 0.0], [np.sin(b), np.cos(b), 0.0], [0.0, 0.0, 1.0]]
    )
    ry = np.array(
        [[np.cos(t), 0.0, np.sin(t)], [0.0, 1.0, 0.0], [-np.sin(t), 0.0, np.cos(t)]]
    )
    return rz @ ry


@dataclass(frozen=True)
class NodeKinematics:
    """Position and boresight orientation of a BS sector, RIS panel, or UE."""

    position: np.ndarray
    orientation: Orientation = Orientation()

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        if pos.shape != (3,):
            raise InvalidConfigError("position must be a 3-vector")
        if pos[2] < 0.0:
            raise InvalidConfigError("deployed nodes must satisfy z >= 0")
        object.__setattr__(self, "position", pos)

    def rotation(self) -> np.ndarray:
        return rotation_matrix(self.orientation)


@dataclass(frozen=True)
class AngleSet:
    """Departure (zod/aod) and arrival (zoa/aoa) angles of one hop, degrees.

    Departure angles live in the departing node's local frame, arrival angles
    in the arriving node's.  Both describe the unit vector pointing outward
    from the node toward the far end of the hop.
    """

    zod_deg: float
    aod_deg: float
    zoa_deg: float
    aoa_deg: float


def spherical_unit_vector(zenith_deg, azimuth_deg) -> np.ndarray:
    """Unit vector (sin t cos p, sin t sin p, cos t); angles in degrees.

    Accepts scalars or broadcastable arrays; the unit vectors are stacked on
    a trailing axis of size 3.
    """
    zen = np.asarray(zenith_deg, dtype=float)
    if np.any(zen < 0.0) or np.any(zen > 180.0):
        raise DomainError("zenith angle outside [0, 180] degrees")
    t = np.radians(zen)
    p = np.radians(np.asarray(azimuth_deg, dtype=float))
    st = np.sin(t)
    return np.stack(
        np.broadcast_arrays(st * np.cos(p), st * np.sin(p), np.cos(t)), axis=-1
    )


def unit_vector_angles(vec) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of spherical_unit_vector: (zenith_deg, azimuth_deg) of vectors."""
    v = np.asarray(vec, dtype=float)
    norm = np.linalg.norm(v, axis=-1)
    zen = np.degrees(np.arccos(np.clip(v[..., 2] / norm, -1.0, 1.0)))
    az = np.degrees(np.arctan2(v[..., 1], v[..., 0]))
    return zen, az


def is_front_hemisphere(zenith_deg, azimuth_deg) -> np.ndarray:
    """True where the direction has a positive boresight (+x) component."""
    return spherical_unit_vector(zenith_deg, azimuth_deg)[..., 0] > 0.0


def link_angles(frm: NodeKinematics, to: NodeKinematics) -> AngleSet:
    """Angles of the frm->to hop, each side in its own local frame."""
    sep = to.position - frm.position
    dist = np.linalg.norm(sep)
    if dist < 1e-9:
        raise DegenerateGeometryError("link endpoints coincide")
    dep_local = frm.rotation().T @ (sep / dist)
    arr_local = to.rotation().T @ (-sep / dist)
    zod, aod = unit_vector_angles(dep_local)
    zoa, aoa = unit_vector_angles(arr_local)
    return AngleSet(float(zod), float(aod), float(zoa), float(aoa))


@dataclass(frozen=True)
class SectorInfo:
    """One of the three sectors of a site."""

    site_index: int
    bearing_deg: float
    node: NodeKinematics


@dataclass(frozen=True)
class NetworkLayout:
    """Hexagonal multi-site layout with tri-sector base stations."""

    sites: tuple[np.ndarray, ...]
    sectors: tuple[SectorInfo, ...]
    inter_site_distance_m: float

    @property
    def cell_radius_m(self) -> float:
        return self.inter_site_distance_m / 2.0


def build_hex_layout(
    isd_m: float, bs_height_m: float, bs_downtilt_deg: float = 0.0
) -> NetworkLayout:
    """Centre site plus one hexagonal ring: 7 sites, 21 sectors."""
    if isd_m <= 0.0:
        raise InvalidConfigError("inter-site distance must be positive")
    if bs_height_m < 0.0:
        raise InvalidConfigError("BS height must be non-negative")
    site_xy = [(0.0, 0.0)]
    for k in range(6):
        ang = np.radians(60.0 * k)
        site_xy.append((isd_m * np.cos(ang), isd_m * np.sin(ang)))
    sites = tuple(np.array([x, y, bs_height_m]) for x, y in site_xy)
    sectors = []
    for i, pos in enumerate(sites):
        for bearing in SECTOR_BEARINGS_DEG:
            node = NodeKinematics(pos, Orientation(bearing, bs_downtilt_deg))
            sectors.append(SectorInfo(i, bearing, node))
    return NetworkLayout(sites, tuple(sectors), float(isd_m))


@dataclass(frozen=True)
class PlacedRIS:
    """A reflecting panel attached to one sector."""

    sector_index: int
    node: NodeKinematics


@dataclass(frozen=True)
class PlacedUE:
    """A dropped user; sector_index is the drop wedge, not the serving cell."""

    sector_index: int
    node: NodeKinematics


def _annulus_radius(rng: np.random.Generator, r_lo: float, r_hi: float) -> float:
    # Uniform by area over the annulus [r_lo, r_hi].
    return float(np.sqrt(rng.uniform(r_lo**2, r_hi**2)))


def place_nodes(
    layout: NetworkLayout,
    scenario: ScenarioKind | str,
    ris_per_sector: int,
    rng_seed,
    *,
    ue_per_sector: int = 10,
    ris_height_m: float = 15.0,
    ris_downtilt_deg: float = 10.0,
    ue_height_m: float = 1.5,
    min_bs_ue_2d_m: float = 35.0,
) -> tuple[list[PlacedRIS], list[PlacedUE]]:
    """Place RIS panels and drop UEs for one Monte-Carlo realization.

    Panels are deterministic: evenly spaced in azimuth across each sector
    wedge at a scenario-dependent radius, facing their serving BS, tilted
    down by ris_downtilt_deg.  UEs are random within the scenario's radial
    band of the wedge; their stream is independent of the panel count so a
    zero-RIS run reproduces identical UE positions.
    """
    try:
        scenario = ScenarioKind(scenario)
    except ValueError as exc:
        raise InvalidConfigError(f"unknown scenario kind: {scenario!r}") from exc
    if ris_per_sector < 0:
        raise InvalidConfigError("ris_per_sector must be >= 0")
    if ue_per_sector < 1:
        raise InvalidConfigError("ue_per_sector must be >= 1")

    cell_radius = layout.cell_radius_m
    if min_bs_ue_2d_m >= cell_radius:
        raise InvalidConfigError("minimum BS-UE distance exceeds the cell radius")

    if scenario is ScenarioKind.UE_EDGE_RIS_MIDDLE:
        ris_radius = MIDDLE_RIS_RADIUS_FACTOR * cell_radius
    else:
        ris_radius = EDGE_RIS_RADIUS_FACTOR * cell_radius

    ris_list: list[PlacedRIS] = []
    for s_idx, sector in enumerate(layout.sectors):
        site = layout.sites[sector.site_index]
        for i in range(ris_per_sector):
            az = (
                sector.bearing_deg
                - SECTOR_HALF_WIDTH_DEG
                + (i + 0.5) * 2.0 * SECTOR_HALF_WIDTH_DEG / ris_per_sector
            )
            rad = np.radians(az)
            pos = np.array(
                [
                    site[0] + ris_radius * np.cos(rad),
                    site[1] + ris_radius * np.sin(rad),
                    ris_height_m,
                ]
            )
            orient = Orientation((az + 180.0) % 360.0, ris_downtilt_deg)
            ris_list.append(PlacedRIS(s_idx, NodeKinematics(pos, orient)))

    if scenario is ScenarioKind.UE_RANDOM_RIS_EDGE:
        r_lo, r_hi = min_bs_ue_2d_m, cell_radius
    else:
        r_lo = max(EDGE_UE_BAND[0] * cell_radius, min_bs_ue_2d_m)
        r_hi = EDGE_UE_BAND[1] * cell_radius

    seq = (
        rng_seed
        if isinstance(rng_seed, np.random.SeedSequence)
        else np.random.SeedSequence(rng_seed)
    )
    ue_rng = np.random.default_rng(seq)
    ue_list: list[PlacedUE] = []
    for s_idx, sector in enumerate(layout.sectors):
        site = layout.sites[sector.site_index]
        for _ in range(ue_per_sector):
            r = _annulus_radius(ue_rng, r_lo, r_hi)
            az = np.radians(
                sector.bearing_deg
                + ue_rng.uniform(-SECTOR_HALF_WIDTH_DEG, SECTOR_HALF_WIDTH_DEG)
            )
            pos = np.array(
                [site[0] + r * np.cos(az), site[1] + r * np.sin(az), ue_height_m]
            )
            ue_list.append(PlacedUE(s_idx, NodeKinematics(pos)))
    return ris_list, ue_list

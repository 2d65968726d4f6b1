"""Monte-Carlo drop orchestration: association, panel phase configuration,
interference accounting, SINR, and CDF statistics.

A drop realizes one set of user positions and shadow-fading samples.  Users
associate to the sector with the strongest direct power, then pick the
serving-sector panel whose phase-aligned two-hop path is strongest.  Every
panel also carries a fixed interference profile, optimized for a uniformly
random user of its own sector, so reflections of neighbouring base stations
are never aligned toward the victim.  Interference is split into three
categories: direct neighbour-sector power, power reflected by the
neighbouring cells' own panels, and power reflected by the serving cell's
panels.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channel, geometry
from .antenna import BS_ELEMENT, RIS_ELEMENT, ElementPatternParams, element_field_amplitude
from .config import ScenarioConfig
from .errors import InvalidConfigError
from .geometry import ScenarioKind
from .ris import PhaseProfile, line_array_factor, quantize_phase

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class DropRecord:
    """Outcome for one UE in one drop."""

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

    @property
    def interference_total_w(self) -> float:
        return (
            self.interference_direct_w
            + self.interference_neighbor_ris_w
            + self.interference_own_ris_w
        )


@dataclass(frozen=True)
class CdfCurve:
    """Empirical CDF: sorted samples with cumulative probabilities."""

    values: np.ndarray
    probabilities: np.ndarray

    @classmethod
    def from_samples(cls, samples) -> "CdfCurve":
        v = np.sort(np.asarray(samples, dtype=float))
        if v.size == 0:
            raise InvalidConfigError("cannot build a CDF from zero samples")
        p = np.arange(1, v.size + 1) / v.size
        return cls(v, p)

    def percentile(self, q: float) -> float:
        return float(np.percentile(self.values, q))


def sinr_db(signal_w: float, interference_w: float, noise_w: float) -> float:
    """10 log10(signal / (interference + noise))."""
    if noise_w <= 0.0:
        raise InvalidConfigError("noise power must be positive")
    if signal_w <= 0.0:
        return float("-inf")
    return 10.0 * math.log10(signal_w / (interference_w + noise_w))


def _local_angles(local):
    """Zenith/azimuth (degrees) of local-frame unit vectors, trailing axis 3."""
    zen = np.degrees(np.arccos(np.clip(local[..., 2], -1.0, 1.0)))
    az = np.degrees(np.arctan2(local[..., 1], local[..., 0]))
    return zen, az


@dataclass
class DropState:
    """Frozen outcome tables of one drop.

    Array shapes: S sectors, R panels, N users.  The per-pair hop tables keep
    the local-frame y/z components of the hop unit vectors so fixed-profile
    reflections evaluate through the separable line array factors.
    """

    config: ScenarioConfig
    drop_index: int
    layout: geometry.NetworkLayout
    ris_nodes: list[geometry.PlacedRIS]
    ue_nodes: list[geometry.PlacedUE]
    carrier: channel.CarrierConfig
    noise_w: float
    serving_sector: np.ndarray         # (N,)
    direct_power_w: np.ndarray         # (S, N)
    signal_w: np.ndarray               # (N,)
    ris_signal_w: np.ndarray           # (N,)
    serving_ris: np.ndarray            # (N,), -1 when no usable panel
    cat_direct_w: np.ndarray           # (N,)
    cat_neighbor_ris_w: np.ndarray     # (N,)
    cat_own_ris_w: np.ndarray          # (N,)
    aligned_signal_table_w: np.ndarray # (R, N) phase-aligned serving-path power
    sector_ris_power_w: np.ndarray     # (S, S, N) BS b via panels of sector c


def _panel_element_coords_wl(cfg: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    # Element y/z coordinates in wavelengths, row-major over (row, col).
    y = (np.arange(cfg.ris.cols) - (cfg.ris.cols - 1) / 2.0) * cfg.ris.spacing_h_wl
    z = (np.arange(cfg.ris.rows) - (cfg.ris.rows - 1) / 2.0) * cfg.ris.spacing_v_wl
    return np.tile(y, cfg.ris.rows), np.repeat(z, cfg.ris.cols)


def build_drop_state(
    config: ScenarioConfig, drop_seed, drop_index: int = 0
) -> DropState:
    """Place nodes, draw shadow fading, fix profiles, and evaluate all tables."""
    cfg = config
    seq = (
        drop_seed
        if isinstance(drop_seed, np.random.SeedSequence)
        else np.random.SeedSequence(drop_seed)
    )
    # Independent child streams; UE placement must not depend on panel count.
    s_place, s_sf_direct, s_sf_hop1, s_sf_hop2, s_profiles = seq.spawn(5)

    layout = geometry.build_hex_layout(
        cfg.layout.isd_m, cfg.layout.bs_height_m, cfg.layout.bs_downtilt_deg
    )
    ris_nodes, ue_nodes = geometry.place_nodes(
        layout,
        cfg.drop.scenario,
        cfg.ris.per_sector,
        s_place,
        ue_per_sector=cfg.drop.ue_per_sector,
        ris_height_m=cfg.layout.ris_height_m,
        ris_downtilt_deg=cfg.layout.ris_downtilt_deg,
        ue_height_m=cfg.layout.ue_height_m,
        min_bs_ue_2d_m=cfg.layout.min_bs_ue_distance_m,
    )
    carrier = channel.CarrierConfig(
        frequency_hz=cfg.carrier.frequency_hz,
        tx_power_w=channel.dbm_to_watts(cfg.carrier.tx_power_dbm),
        bandwidth_hz=cfg.carrier.bandwidth_hz,
        noise_figure_db=cfg.carrier.noise_figure_db,
    )
    noise_w = channel.noise_power_w(
        cfg.carrier.bandwidth_hz, cfg.carrier.noise_figure_db
    )

    bs_params = BS_ELEMENT
    ris_params = (
        RIS_ELEMENT
        if cfg.ris.element_rolloff
        else ElementPatternParams(g_e_max_dbi=0.0, angular_rolloff=False)
    )
    fc = cfg.carrier.frequency_hz
    tx_w = carrier.tx_power_w
    sigma = cfg.propagation.shadow_sigma_db

    n_sectors = len(layout.sectors)
    n_ue = len(ue_nodes)
    n_panels = len(ris_nodes)

    site_pos = np.stack([s.node.position for s in layout.sectors])  # (S, 3)
    bs_rot = np.stack([s.node.rotation() for s in layout.sectors])  # (S, 3, 3)
    ue_pos = np.stack([u.node.position for u in ue_nodes])          # (N, 3)

    # Direct BS-UE table and association.
    diff = ue_pos[None, :, :] - site_pos[:, None, :]
    d2d = np.hypot(diff[..., 0], diff[..., 1])
    d3d = np.linalg.norm(diff, axis=-1)
    dirs = diff / d3d[..., None]
    local_bs = np.einsum("sij,sni->snj", bs_rot, dirs)
    zen, az = _local_angles(local_bs)
    g_bs_direct = element_field_amplitude(zen, az, bs_params) ** 2
    pl_direct = channel.clamped_pathloss_db(
        d2d, cfg.layout.bs_height_m, cfg.layout.ue_height_m, fc
    )
    if cfg.propagation.direct_link == "nlos":
        pl_direct = pl_direct + cfg.propagation.nlos_extra_loss_db
    sf_direct = np.random.default_rng(s_sf_direct).normal(
        0.0, sigma, size=(n_sectors, n_ue)
    )
    direct_w = tx_w * 10.0 ** (-(pl_direct + sf_direct) / 10.0) * g_bs_direct
    serving = np.argmax(direct_w, axis=0)

    ue_idx = np.arange(n_ue)
    cat1 = direct_w.sum(axis=0) - direct_w[serving, ue_idx]

    if n_panels == 0:
        signal = direct_w[serving, ue_idx]
        zeros = np.zeros(n_ue)
        return DropState(
            config=cfg,
            drop_index=drop_index,
            layout=layout,
            ris_nodes=ris_nodes,
            ue_nodes=ue_nodes,
            carrier=carrier,
            noise_w=noise_w,
            serving_sector=serving,
            direct_power_w=direct_w,
            signal_w=signal,
            ris_signal_w=zeros,
            serving_ris=np.full(n_ue, -1, dtype=int),
            cat_direct_w=cat1,
            cat_neighbor_ris_w=np.zeros(n_ue),
            cat_own_ris_w=np.zeros(n_ue),
            aligned_signal_table_w=np.zeros((0, n_ue)),
            sector_ris_power_w=np.zeros((n_sectors, n_sectors, n_ue)),
        )

    panel_pos = np.stack([p.node.position for p in ris_nodes])      # (R, 3)
    panel_rot = np.stack([p.node.rotation() for p in ris_nodes])    # (R, 3, 3)
    panel_sector = np.array([p.sector_index for p in ris_nodes])
    per_sector = cfg.ris.per_sector
    k_elem = cfg.ris.rows * cfg.ris.cols

    # Hop 1: BS sector -> panel.
    diff1 = panel_pos[None, :, :] - site_pos[:, None, :]
    d2d1 = np.hypot(diff1[..., 0], diff1[..., 1])
    d3d1 = np.linalg.norm(diff1, axis=-1)
    dirs1 = diff1 / d3d1[..., None]
    dep_local = np.einsum("sij,sri->srj", bs_rot, dirs1)
    arr_local = np.einsum("rij,sri->srj", panel_rot, -dirs1)
    zen_d, az_d = _local_angles(dep_local)
    zen_a, az_a = _local_angles(arr_local)
    f_bs = element_field_amplitude(zen_d, az_d, bs_params)
    f_in = element_field_amplitude(zen_a, az_a, ris_params)
    vis1 = (dep_local[..., 0] > 0.0) & (arr_local[..., 0] > 0.0)
    in_y = arr_local[..., 1]
    in_z = arr_local[..., 2]
    pl1 = channel.clamped_pathloss_db(
        d2d1, cfg.layout.bs_height_m, cfg.layout.ris_height_m, fc
    )
    sf1 = np.random.default_rng(s_sf_hop1).normal(
        0.0, sigma, size=(n_sectors, n_panels)
    )
    att1 = 10.0 ** (-(pl1 + sf1) / 10.0)

    # Hop 2: panel -> UE.
    diff2 = ue_pos[None, :, :] - panel_pos[:, None, :]
    d2d2 = np.hypot(diff2[..., 0], diff2[..., 1])
    d3d2 = np.linalg.norm(diff2, axis=-1)
    dirs2 = diff2 / d3d2[..., None]
    out_local = np.einsum("rij,rni->rnj", panel_rot, dirs2)
    zen_o, az_o = _local_angles(out_local)
    f_out = element_field_amplitude(zen_o, az_o, ris_params)
    vis2 = out_local[..., 0] > 0.0
    out_y = out_local[..., 1]
    out_z = out_local[..., 2]
    pl2 = channel.clamped_pathloss_db(
        d2d2, cfg.layout.ris_height_m, cfg.layout.ue_height_m, fc
    )
    sf2 = np.random.default_rng(s_sf_hop2).normal(
        0.0, sigma, size=(n_panels, n_ue)
    )
    att2 = 10.0 ** (-(pl2 + sf2) / 10.0)

    # Fixed interference profile per panel: phase-aligned for a uniformly
    # random UE served by the panel's sector; idle panels aim at a random
    # location inside the sector wedge.
    prof_rng = np.random.default_rng(s_profiles)
    anchor_y = np.empty(n_panels)
    anchor_z = np.empty(n_panels)
    if cfg.drop.scenario is ScenarioKind.UE_RANDOM_RIS_EDGE:
        band = (cfg.layout.min_bs_ue_distance_m, layout.cell_radius_m)
    else:
        band = (
            max(geometry.EDGE_UE_BAND[0] * layout.cell_radius_m,
                cfg.layout.min_bs_ue_distance_m),
            geometry.EDGE_UE_BAND[1] * layout.cell_radius_m,
        )
    for r in range(n_panels):
        sec = panel_sector[r]
        cands = np.flatnonzero(serving == sec)
        if cands.size:
            target = int(prof_rng.choice(cands))
            anchor_y[r] = in_y[sec, r] + out_y[r, target]
            anchor_z[r] = in_z[sec, r] + out_z[r, target]
        else:
            sector = layout.sectors[sec]
            site = layout.sites[sector.site_index]
            rad = float(np.sqrt(prof_rng.uniform(band[0] ** 2, band[1] ** 2)))
            ang = np.radians(
                sector.bearing_deg
                + prof_rng.uniform(
                    -geometry.SECTOR_HALF_WIDTH_DEG, geometry.SECTOR_HALF_WIDTH_DEG
                )
            )
            spot = np.array(
                [site[0] + rad * np.cos(ang), site[1] + rad * np.sin(ang),
                 cfg.layout.ue_height_m]
            )
            d = spot - panel_pos[r]
            d = d / np.linalg.norm(d)
            loc = panel_rot[r].T @ d
            anchor_y[r] = in_y[sec, r] + loc[1]
            anchor_z[r] = in_z[sec, r] + loc[2]

    ey, ez = _panel_element_coords_wl(cfg)
    bits = cfg.ris.quantization_bits

    # Power reflected by panel r toward UE u when illuminated by sector b,
    # under the panel's fixed profile: (S, R, N).
    amp_sq = (f_bs[:, :, None] * f_in[:, :, None] * f_out[None, :, :]) ** 2
    att = att1[:, :, None] * att2[None, :, :]
    visible = vis1[:, :, None] & vis2[None, :, :]
    if bits == 0:
        psi_y = TWO_PI * cfg.ris.spacing_h_wl * (
            in_y[:, :, None] + out_y[None, :, :] - anchor_y[None, :, None]
        )
        psi_z = TWO_PI * cfg.ris.spacing_v_wl * (
            in_z[:, :, None] + out_z[None, :, :] - anchor_z[None, :, None]
        )
        af = line_array_factor(cfg.ris.cols, psi_y) * line_array_factor(
            cfg.ris.rows, psi_z
        )
        af_sq = af**2
    else:
        af_sq = np.empty((n_sectors, n_panels, n_ue))
        for r in range(n_panels):
            ref = TWO_PI * (anchor_y[r] * ey + anchor_z[r] * ez)
            prof = quantize_phase(PhaseProfile(-ref), bits).phases
            e_in = np.exp(
                1j * (TWO_PI * (np.outer(in_y[:, r], ey) + np.outer(in_z[:, r], ez))
                      + prof)
            )
            e_out = np.exp(
                1j * TWO_PI * (np.outer(ey, out_y[r, :]) + np.outer(ez, out_z[r, :]))
            )
            af_sq[:, r, :] = np.abs(e_in @ e_out) ** 2
    ris_power = tx_w * att * amp_sq * af_sq * visible

    # Sum over the panels of each sector: (S BS, S panel-owner sector, N).
    sector_ris_power = ris_power.reshape(
        n_sectors, n_sectors, per_sector, n_ue
    ).sum(axis=2)

    own_reflection = np.einsum("bbn->bn", sector_ris_power)
    cat2 = own_reflection.sum(axis=0) - own_reflection[serving, ue_idx]
    through_serving = sector_ris_power[:, serving, ue_idx]
    cat3 = through_serving.sum(axis=0) - through_serving[serving, ue_idx]

    # Serving-panel selection: aligned two-hop power, serving sector only.
    att1_sel = att1[serving, :].T
    f1_sel = (f_bs[serving, :] * f_in[serving, :]).T
    vis_sel = vis1[serving, :].T & vis2
    allowed = panel_sector[:, None] == serving[None, :]
    aligned = (
        tx_w
        * att1_sel
        * att2
        * (f1_sel * f_out * k_elem) ** 2
        * (vis_sel & allowed)
    )
    best = np.argmax(aligned, axis=0)
    best_power = aligned[best, ue_idx]
    serving_ris = np.where(best_power > 0.0, best, -1)

    ris_signal = best_power.copy()
    if bits != 0:
        chosen = np.flatnonzero(serving_ris >= 0)
        if chosen.size:
            r_sel = serving_ris[chosen]
            s_sel = serving[chosen]
            sy = in_y[s_sel, r_sel] + out_y[r_sel, chosen]
            sz = in_z[s_sel, r_sel] + out_z[r_sel, chosen]
            tilde = TWO_PI * (sy[:, None] * ey + sz[:, None] * ez)
            prof = quantize_phase(PhaseProfile(-tilde), bits).phases
            af_q = np.abs(np.exp(1j * (tilde + prof)).sum(axis=1))
            ris_signal[chosen] = best_power[chosen] * (af_q / k_elem) ** 2

    signal = direct_w[serving, ue_idx] + ris_signal
    return DropState(
        config=cfg,
        drop_index=drop_index,
        layout=layout,
        ris_nodes=ris_nodes,
        ue_nodes=ue_nodes,
        carrier=carrier,
        noise_w=noise_w,
        serving_sector=serving,
        direct_power_w=direct_w,
        signal_w=signal,
        ris_signal_w=ris_signal,
        serving_ris=serving_ris,
        cat_direct_w=cat1,
        cat_neighbor_ris_w=cat2,
        cat_own_ris_w=cat3,
        aligned_signal_table_w=aligned,
        sector_ris_power_w=sector_ris_power,
    )


def interference_power(state: DropState, ue_index: int) -> tuple[float, float, float]:
    """Interference seen by one UE, split into the three categories."""
    return (
        float(state.cat_direct_w[ue_index]),
        float(state.cat_neighbor_ris_w[ue_index]),
        float(state.cat_own_ris_w[ue_index]),
    )


def drop_records(state: DropState) -> list[DropRecord]:
    """Assemble one DropRecord per UE from the drop tables."""
    records = []
    for u in range(len(state.ue_nodes)):
        cat1, cat2, cat3 = interference_power(state, u)
        signal = float(state.signal_w[u])
        records.append(
            DropRecord(
                drop_index=state.drop_index,
                ue_index=u,
                serving_sector=int(state.serving_sector[u]),
                serving_ris=(
                    int(state.serving_ris[u]) if state.serving_ris[u] >= 0 else None
                ),
                signal_w=signal,
                ris_signal_w=float(state.ris_signal_w[u]),
                interference_direct_w=cat1,
                interference_neighbor_ris_w=cat2,
                interference_own_ris_w=cat3,
                noise_w=state.noise_w,
                sinr_db=sinr_db(signal, cat1 + cat2 + cat3, state.noise_w),
                rx_power_dbm=float(channel.watts_to_dbm(signal)),
            )
        )
    return records


def run_drop(config: ScenarioConfig, drop_seed, drop_index: int = 0) -> list[DropRecord]:
    """Run one Monte-Carlo drop and return per-UE records."""
    return drop_records(build_drop_state(config, drop_seed, drop_index))


def _run_drop_task(args):
    config, seed_seq, index = args
    return index, run_drop(config, seed_seq, index)


@dataclass
class CampaignResult:
    """Pooled outcome of a multi-drop campaign."""

    config: ScenarioConfig
    master_seed: int
    records: list[DropRecord]
    cdf_rx_power: CdfCurve
    cdf_sinr: CdfCurve
    percentiles: dict
    duration_s: float


def _percentile_summary(curve: CdfCurve) -> dict:
    return {
        "p05": curve.percentile(5.0),
        "p50": curve.percentile(50.0),
        "p95": curve.percentile(95.0),
    }


def run_campaign(
    config: ScenarioConfig,
    n_drops: int | None = None,
    workers: int = 1,
    master_seed: int | None = None,
) -> CampaignResult:
    """Run a campaign of independent drops and pool the statistics.

    Per-drop seeds derive from the master seed, and records are ordered by
    (drop, ue), so the result does not depend on the worker count.
    """
    drops = n_drops if n_drops is not None else config.drop.drops
    if drops < 1:
        raise InvalidConfigError("a campaign needs at least one drop")
    seed = int(master_seed if master_seed is not None else config.drop.seed)
    started = time.perf_counter()
    tasks = [
        (config, seq, i)
        for i, seq in enumerate(np.random.SeedSequence(seed).spawn(drops))
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_drop_task, tasks))
    else:
        chunks = [_run_drop_task(t) for t in tasks]
    chunks.sort(key=lambda c: c[0])
    records = [rec for _, recs in chunks for rec in recs]

    cdf_rx = CdfCurve.from_samples([r.rx_power_dbm for r in records])
    cdf_sinr = CdfCurve.from_samples([r.sinr_db for r in records])
    return CampaignResult(
        config=config,
        master_seed=seed,
        records=records,
        cdf_rx_power=cdf_rx,
        cdf_sinr=cdf_sinr,
        percentiles={
            "rx_power_dbm": _percentile_summary(cdf_rx),
            "sinr_db": _percentile_summary(cdf_sinr),
        },
        duration_s=time.perf_counter() - started,
    )

"""Result serialization: record/CDF tables, JSON mirrors, and run manifests.

Every float is serialized with 9 significant digits so identical runs emit
byte-identical data files regardless of worker count or platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import ScenarioConfig, config_digest, validate_config
from .errors import InvalidConfigError, RisSimError
from .netsim import CampaignResult, CdfCurve, DropRecord

RECORD_COLUMNS = (
    "drop_index",
    "ue_index",
    "serving_sector",
    "serving_ris",
    "signal_w",
    "ris_signal_w",
    "interference_direct_w",
    "interference_neighbor_ris_w",
    "interference_own_ris_w",
    "noise_w",
    "sinr_db",
    "rx_power_dbm",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.9g}"


def _record_cells(rec: DropRecord) -> list:
    return [getattr(rec, col) for col in RECORD_COLUMNS]


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility metadata written next to the result tables."""

    config_digest: str
    master_seed: int
    tool_version: str
    duration_s: float
    outputs: tuple[str, ...]
    config: dict
    percentiles: dict

    def to_json(self) -> dict:
        return {
            "config_digest": self.config_digest,
            "master_seed": self.master_seed,
            "tool_version": self.tool_version,
            "duration_s": float(_fmt(self.duration_s)),
            "outputs": list(self.outputs),
            "config": self.config,
            "percentiles": self.percentiles,
        }


def _write_csv(path: Path, header: tuple, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")


def _round9(value: float):
    return None if value is None else float(_fmt(value))


def _cdf_pairs(curve: CdfCurve):
    return zip(curve.values.tolist(), curve.probabilities.tolist())


def emit_results(
    result: CampaignResult,
    out_dir,
    formats=("csv",),
    pattern_dumps: dict | None = None,
) -> tuple[RunManifest, list[Path]]:
    """Write the campaign outputs into out_dir and return the manifest.

    csv format: records.csv plus cdf_rxpower.csv / cdf_sinr.csv with columns
    (value, cum_prob).  json format mirrors the same tables.  pattern_dumps
    maps a name to (zenith, azimuth, gain_db) rows written as
    pattern_<name>.csv.  Partial outputs are removed on failure.
    """
    formats = tuple(formats)
    unknown = set(formats) - {"csv", "json"}
    if unknown or not formats:
        raise InvalidConfigError(f"unsupported output formats: {sorted(unknown)}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise RisSimError(f"cannot create output directory {out}: {exc}") from exc

    written: list[Path] = []
    rec_dicts = [
        {col: _round9(v) if isinstance(v, float) else v
         for col, v in zip(RECORD_COLUMNS, _record_cells(r))}
        for r in result.records
    ]
    percentiles = {
        metric: {name: _round9(v) for name, v in vals.items()}
        for metric, vals in result.percentiles.items()
    }
    try:
        if "csv" in formats:
            path = out / "records.csv"
            _write_csv(path, RECORD_COLUMNS, map(_record_cells, result.records))
            written.append(path)
            for name, curve in (
                ("cdf_rxpower.csv", result.cdf_rx_power),
                ("cdf_sinr.csv", result.cdf_sinr),
            ):
                path = out / name
                _write_csv(path, ("value", "cum_prob"), _cdf_pairs(curve))
                written.append(path)
        if "json" in formats:
            path = out / "records.json"
            path.write_text(json.dumps(rec_dicts, indent=1) + "\n")
            written.append(path)
            for name, curve in (
                ("cdf_rxpower.json", result.cdf_rx_power),
                ("cdf_sinr.json", result.cdf_sinr),
            ):
                payload = {
                    "value": [_round9(v) for v in curve.values.tolist()],
                    "cum_prob": [_round9(p) for p in curve.probabilities.tolist()],
                }
                path = out / name
                path.write_text(json.dumps(payload, indent=1) + "\n")
                written.append(path)
        for name, rows in (pattern_dumps or {}).items():
            path = out / f"pattern_{name}.csv"
            _write_csv(path, ("out_zenith_deg", "out_azimuth_deg", "gain_db"), rows)
            written.append(path)

        manifest = RunManifest(
            config_digest=config_digest(result.config),
            master_seed=result.master_seed,
            tool_version=__version__,
            duration_s=result.duration_s,
            outputs=tuple(p.name for p in written),
            config=result.config.model_dump(mode="json"),
            percentiles=percentiles,
        )
        manifest_path = out / "manifest.json"
        manifest_path.write_text(json.dumps(manifest.to_json(), indent=1) + "\n")
        written.append(manifest_path)
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        raise RisSimError(f"failed writing results to {out}: {exc}") from exc
    return manifest, written


def load_cdf_csv(path) -> CdfCurve:
    """Read a (value, cum_prob) CSV back into a curve."""
    raw = Path(path).read_text().strip().splitlines()
    if not raw or raw[0].split(",")[:2] != ["value", "cum_prob"]:
        raise RisSimError(f"{path} is not a CDF table")
    values, probs = [], []
    for line in raw[1:]:
        v, p = line.split(",")[:2]
        values.append(float(v))
        probs.append(float(p))
    return CdfCurve(np.asarray(values), np.asarray(probs))


def load_manifest(out_dir) -> RunManifest:
    """Read a manifest.json back, revalidating the embedded config."""
    path = Path(out_dir) / "manifest.json"
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise RisSimError(f"cannot read manifest at {path}: {exc}") from exc
    validate_config(data.get("config", {}))
    return RunManifest(
        config_digest=data["config_digest"],
        master_seed=data["master_seed"],
        tool_version=data["tool_version"],
        duration_s=data["duration_s"],
        outputs=tuple(data["outputs"]),
        config=data["config"],
        percentiles=data["percentiles"],
    )


def _curve_percentile(curve: CdfCurve, q: float) -> float:
    return float(np.interp(q / 100.0, curve.probabilities, curve.values))


def compare_runs(dir_a, dir_b, quantiles=(5.0, 50.0, 95.0)) -> dict:
    """Per-percentile deltas (B minus A, in dB) between two result sets."""
    deltas: dict = {}
    for metric, filename in (
        ("rx_power_dbm", "cdf_rxpower.csv"),
        ("sinr_db", "cdf_sinr.csv"),
    ):
        curve_a = load_cdf_csv(Path(dir_a) / filename)
        curve_b = load_cdf_csv(Path(dir_b) / filename)
        deltas[metric] = {
            f"p{int(q):02d}_delta_db": _round9(
                _curve_percentile(curve_b, q) - _curve_percentile(curve_a, q)
            )
            for q in quantiles
        }
    return deltas

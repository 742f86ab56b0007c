# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""
CSV/JSON emission. Doubles are written with 17 significant digits and a fixed
line terminator so identical results give identical bytes and checksums.
"""

import hashlib
import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, List

import pandas as pd

from .energy import ShellProfile
from .ensemble import EnsembleRecord
from .estimate import FitResult
from .krylov import DistanceSeries
from .schemas import RunManifest

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

SWEEP_COLUMNS = ["c", "realization", "y", "L", "gamma", "sse", "breakdown", "drift"]
SUMMARY_COLUMNS = ["c", "min_y", "min_L", "argmin_y", "argmin_L"]
ENERGY_COLUMNS = ["s", "energy", "cumulative_fraction"]
SERIES_COLUMNS = ["k", "bessel_term", "partial_sum", "D", "alpha", "beta"]


def _write_frame(frame: pd.DataFrame, path: str) -> str:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    return path


def write_sweep_csv(records: Iterable[EnsembleRecord], path: str) -> str:
    rows = [
        {
            "c": r.c,
            "realization": r.realization,
            "y": r.y,
            "L": r.l_lower,
            "gamma": r.gamma,
            "sse": r.sse,
            "breakdown": int(r.breakdown),
            "drift": r.drift,
        }
        for record in records
        for r in record.realizations
    ]
    return _write_frame(pd.DataFrame(rows, columns=SWEEP_COLUMNS), path)


def write_summary_csv(records: Iterable[EnsembleRecord], path: str) -> str:
    frame = pd.DataFrame(
        [
            {"c": r.c, "min_y": r.min_y, "min_L": r.min_l, "argmin_y": r.argmin_y, "argmin_L": r.argmin_l}
            for r in records
        ],
        columns=SUMMARY_COLUMNS,
    )
    frame["argmin_y"] = frame["argmin_y"].astype("Int64")
    frame["argmin_L"] = frame["argmin_L"].astype("Int64")
    return _write_frame(frame, path)


def write_energy_csv(profile: ShellProfile, path: str) -> str:
    frame = pd.DataFrame(
        {
            "s": [s for s, _ in profile.shells],
            "energy": profile.energies,
            "cumulative_fraction": profile.cumulative_fractions(),
        },
        columns=ENERGY_COLUMNS,
    )
    return _write_frame(frame, path)


def write_series_csv(series: DistanceSeries, path: str) -> str:
    frame = pd.DataFrame(
        [
            {
                "k": t.k,
                "bessel_term": t.bessel_term,
                "partial_sum": t.partial_sum,
                "D": t.distance,
                "alpha": t.alpha,
                "beta": t.beta,
            }
            for t in series.terms
        ],
        columns=SERIES_COLUMNS,
    )
    return _write_frame(frame, path)


def fit_to_dict(fit: FitResult) -> Dict[str, Any]:
    return {
        "gamma": fit.gamma,
        "intercept_y": fit.intercept_y,
        "slope": fit.slope,
        "sse": fit.sse,
        "l_lower": fit.l_lower,
        "tail_start": fit.tail_start,
        "points": fit.points,
        "candidates": [{"gamma": g, "sse": s} for g, s in fit.candidates],
    }


def write_json(payload: Any, path: str) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return path


def file_checksum(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(command: str, config_echo: Dict[str, Any], paths: List[str], out_dir: str) -> RunManifest:
    manifest = RunManifest(
        command=command,
        timestamp=datetime.now(timezone.utc),
        config=config_echo,
        files={os.path.basename(p): file_checksum(p) for p in paths},
    )
    write_json(manifest.model_dump(mode="json"), os.path.join(out_dir, "manifest.json"))
    for name, checksum in manifest.files.items():
        logger.info(f"wrote {name} sha256={checksum}")
    return manifest


def verify_manifest(out_dir: str) -> Dict[str, bool]:
    """File name -> whether its current checksum matches manifest.json."""
    with open(os.path.join(out_dir, "manifest.json"), encoding="utf-8") as fh:
        manifest = RunManifest.model_validate(json.load(fh))
    return {
        name: os.path.exists(os.path.join(out_dir, name))
        and file_checksum(os.path.join(out_dir, name)) == checksum
        for name, checksum in manifest.files.items()
    }

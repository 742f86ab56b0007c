# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""Shell-energy profiles of the orthogonalized Krylov vectors m_k."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import KrylabError, LatticeError
from .krylov import KrylovSnapshot, OrthogonalizationMode, krylov_snapshots
from .lattice import LAPLACIAN_DIAGONAL, PotentialField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShellProfile:
    c: float
    k: int
    shells: tuple[tuple[int, float], ...]
    total: float
    log_norm_sq: float
    normalized: bool = False
    drift: float = 0.0

    @property
    def energies(self) -> np.ndarray:
        return np.array([energy for _, energy in self.shells])

    def cumulative_fractions(self) -> np.ndarray:
        if self.total == 0:
            raise KrylabError(f"profile of m_{self.k} has zero energy")
        cumulative = np.cumsum(self.energies)
        return cumulative / cumulative[-1]


def _profile(c: float, snapshot: KrylovSnapshot) -> ShellProfile:
    energies = snapshot.unit.shell_energies()
    scale = snapshot.norm * snapshot.norm
    normalized = not math.isfinite(scale)
    if normalized:
        logger.info(f"||m_{snapshot.k}||^2 overflows; reporting the normalized profile")
    else:
        energies = energies * scale
    # total is the shell sum, not norm**2
    total = float(np.sum(energies))

    profile = ShellProfile(
        c=c,
        k=snapshot.k,
        shells=tuple((s, float(e)) for s, e in enumerate(energies)),
        total=total,
        log_norm_sq=snapshot.log_norm_sq,
        normalized=normalized,
        drift=snapshot.drift,
    )
    if snapshot.k > 0 and not energies[-1] > 0:
        logger.warning(f"outermost shell of m_{snapshot.k} carries no energy (c={c})")
    return profile


def energy_profiles(
    field: PotentialField,
    ks: Iterable[int],
    mode: OrthogonalizationMode | None = None,
    *,
    diagonal: float = LAPLACIAN_DIAGONAL,
) -> dict[int, ShellProfile]:
    """Profiles of several m_k from one Krylov pass (the wave packet over time)."""
    snapshots = krylov_snapshots(field, ks, mode, diagonal=diagonal)
    return {k: _profile(field.c, snap) for k, snap in snapshots.items()}


def energy_profile(
    field: PotentialField,
    k: int,
    mode: OrthogonalizationMode | None = None,
    *,
    diagonal: float = LAPLACIAN_DIAGONAL,
) -> ShellProfile:
    return energy_profiles(field, [k], mode, diagonal=diagonal)[k]


def near_origin_fraction(profile: ShellProfile, s_cut: int) -> float:
    """Share of ||m_k||^2 on shells s <= s_cut."""
    if s_cut < 0 or s_cut > profile.k:
        raise LatticeError(f"s_cut {s_cut} outside 0..{profile.k}")
    if profile.total == 0:
        raise KrylabError(f"profile of m_{profile.k} has zero energy")
    if s_cut == profile.k:
        return 1.0
    return min(1.0, float(np.sum(profile.energies[: s_cut + 1])) / profile.total)


def peak_shell(profile: ShellProfile) -> int:
    return int(np.argmax(profile.energies))


def outermost_fraction(profile: ShellProfile) -> float:
    """Share of ||m_k||^2 on the outermost diamond s = k."""
    if profile.total == 0:
        raise KrylabError(f"profile of m_{profile.k} has zero energy")
    return min(1.0, float(profile.energies[-1]) / profile.total)

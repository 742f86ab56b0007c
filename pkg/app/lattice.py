# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""
Diamond-supported wave functions on Z^2, the random potential and the
matrix-free discrete Schrödinger operator H = -Δ + V.

Vectors are stored densely on the (2r+1) x (2r+1) bounding square of the
radius-r diamond, indexed ``values[i + r, j + r]``; entries with |i|+|j| > r
are always zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LatticeError

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
LAPLACIAN_DIAGONAL = 4.0


@dataclass(frozen=True)
class LatticeSite:
    i: int
    j: int

    @property
    def shell(self) -> int:
        return abs(self.i) + abs(self.j)


def diamond_size(radius: int) -> int:
    """Number of sites with |i| + |j| <= radius."""
    return 2 * radius * radius + 2 * radius + 1


def site_index(i, j):
    """
    Canonical enumeration of Z^2 shell by shell.

    The origin is 0; shell s >= 1 occupies indices 2s^2 - 2s + 1 ... 2s^2 + 2s,
    walked counter-clockwise starting at (s, 0). Accepts ints or integer arrays.
    """
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    s = np.abs(i) + np.abs(j)

    q0 = (i > 0) & (j >= 0)
    q1 = (i <= 0) & (j > 0)
    q2 = (i < 0) & (j <= 0)
    quadrant = np.select([q0, q1, q2], [0, 1, 2], 3)
    offset_in_side = np.select([q0, q1, q2], [j, -i, -j], i)

    index = np.where(s > 0, 2 * s * s - 2 * s + 1 + quadrant * s + offset_in_side, 0)
    if index.ndim == 0:
        return int(index)
    return index


@lru_cache(maxsize=16)
def shell_grid(radius: int) -> np.ndarray:
    """|i| + |j| over the bounding square of the radius-r diamond (read-only)."""
    axis = np.abs(np.arange(-radius, radius + 1, dtype=np.int64))
    grid = axis[:, None] + axis[None, :]
    grid.setflags(write=False)
    return grid


def centered(grid: np.ndarray, radius: int) -> np.ndarray:
    """View of the radius-r square at the center of a larger square grid."""
    outer = (grid.shape[0] - 1) // 2
    if radius > outer:
        raise LatticeError(f"radius {radius} exceeds grid radius {outer}")
    lo = outer - radius
    return grid[lo:lo + 2 * radius + 1, lo:lo + 2 * radius + 1]


@dataclass(frozen=True)
class DiamondVector:
    radius: int
    values: np.ndarray

    def __post_init__(self):
        if self.radius < 0:
            raise LatticeError(f"radius must be non-negative, got {self.radius}")
        values = np.array(self.values, dtype=np.float64)
        side = 2 * self.radius + 1
        if values.shape != (side, side):
            raise LatticeError(f"values must have shape {(side, side)}, got {values.shape}")
        if np.any(values[shell_grid(self.radius) > self.radius] != 0.0):
            raise LatticeError("values outside the diamond must be zero")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, radius: int) -> "DiamondVector":
        side = 2 * radius + 1
        return cls(radius, np.zeros((side, side)))

    @classmethod
    def delta(cls, i: int, j: int, radius: int | None = None) -> "DiamondVector":
        r = abs(i) + abs(j) if radius is None else radius
        if abs(i) + abs(j) > r:
            raise LatticeError(f"site ({i}, {j}) lies outside the radius-{r} diamond")
        values = np.zeros((2 * r + 1, 2 * r + 1))
        values[i + r, j + r] = 1.0
        return cls(r, values)

    def entry(self, i: int, j: int) -> float:
        if abs(i) + abs(j) > self.radius:
            return 0.0
        return float(self.values[i + self.radius, j + self.radius])

    def embed(self, radius: int) -> "DiamondVector":
        """Same vector stored on a larger diamond."""
        if radius < self.radius:
            raise LatticeError(f"cannot embed radius {self.radius} into radius {radius}")
        side = 2 * radius + 1
        values = np.zeros((side, side))
        centered(values, self.radius)[...] = self.values
        return DiamondVector(radius, values)

    @property
    def squared_norm(self) -> float:
        return float(np.sum(self.values * self.values))

    def shell_energies(self) -> np.ndarray:
        """Energy per l1 shell, s = 0 ... radius."""
        return np.bincount(
            shell_grid(self.radius).ravel(),
            weights=(self.values * self.values).ravel(),
            minlength=self.radius + 1,
        )[: self.radius + 1]

    def __add__(self, other: "DiamondVector") -> "DiamondVector":
        r = max(self.radius, other.radius)
        return DiamondVector(r, self.embed(r).values + other.embed(r).values)

    def __mul__(self, scalar: float) -> "DiamondVector":
        return DiamondVector(self.radius, self.values * float(scalar))

    __rmul__ = __mul__


def inner(a: DiamondVector, b: DiamondVector) -> float:
    """Euclidean inner product; the smaller diamond is embedded into the larger."""
    if a.radius > b.radius:
        a, b = b, a
    return float(np.sum(a.values * centered(b.values, a.radius)))


@dataclass(frozen=True)
class PotentialField:
    """
    i.i.d. uniform [-c, c] on-site disorder.

    Values come from a Philox counter-based stream keyed by (seed, realization);
    the value at (i, j) is the draw at position site_index(i, j), so it does not
    depend on which sites were queried before or on how work is split.
    """
    c: float
    seed: int
    realization: int = 0

    def __post_init__(self):
        if not np.isfinite(self.c) or self.c < 0:
            raise LatticeError(f"disorder c must be a finite non-negative number, got {self.c}")
        if self.realization < 0:
            raise LatticeError(f"realization must be non-negative, got {self.realization}")

    @property
    def key(self) -> int:
        return ((self.realization & MASK64) << 64) | (self.seed & MASK64)

    def _scale(self, raw: np.ndarray) -> np.ndarray:
        unit = (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
        return self.c * (2.0 * unit - 1.0)

    def value(self, i: int, j: int) -> float:
        if self.c == 0:
            return 0.0
        index = site_index(i, j)
        block, lane = divmod(index, 4)
        raw = np.random.Philox(key=self.key, counter=block).random_raw(4)
        return float(self._scale(raw[lane:lane + 1])[0])

    def on_diamond(self, radius: int) -> np.ndarray:
        """Potential over the radius-r bounding square, zero outside the diamond."""
        side = 2 * radius + 1
        if self.c == 0:
            return np.zeros((side, side))
        stream = self._scale(np.random.Philox(key=self.key).random_raw(diamond_size(radius)))
        axis = np.arange(-radius, radius + 1, dtype=np.int64)
        ii, jj = np.meshgrid(axis, axis, indexing="ij")
        inside = shell_grid(radius) <= radius
        grid = np.zeros((side, side))
        grid[inside] = stream[site_index(ii[inside], jj[inside])]
        return grid


def potential_value(field: PotentialField, site: LatticeSite) -> float:
    return field.value(site.i, site.j)


def stencil(values: np.ndarray, potential: np.ndarray, diagonal: float = LAPLACIAN_DIAGONAL) -> np.ndarray:
    """
    One application of H on a raw square array of radius r, returning radius r+1.

    ``potential`` must already be cut to the same shape as ``values``.
    """
    side = values.shape[0]
    out = np.zeros((side + 2, side + 2))
    out[1:-1, 1:-1] = (diagonal + potential) * values
    out[:-2, 1:-1] -= values
    out[2:, 1:-1] -= values
    out[1:-1, :-2] -= values
    out[1:-1, 2:] -= values
    return out


def apply_hamiltonian(
    psi: DiamondVector,
    field: PotentialField,
    *,
    diagonal: float = LAPLACIAN_DIAGONAL,
    potential: np.ndarray | None = None,
) -> DiamondVector:
    """
    (Hψ)(n) = diagonal·ψ(n) - Σ_{|m-n|=1} ψ(m) + ω_n ψ(n).

    ``potential`` may be a precomputed ``field.on_diamond(R)`` grid with R >= psi.radius.
    """
    if potential is None:
        potential = field.on_diamond(psi.radius)
    return DiamondVector(psi.radius + 1, stencil(psi.values, centered(potential, psi.radius), diagonal))


def shell_energy(psi: DiamondVector, s: int) -> float:
    if s < 0 or s > psi.radius:
        raise LatticeError(f"shell {s} outside 0..{psi.radius}")
    return float(psi.shell_energies()[s])

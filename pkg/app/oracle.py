# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""
Dense brute-force reference for the Krylov engine.

H is assembled as an explicit matrix on the l∞ box |i|, |j| <= B, the Krylov
columns are orthonormalized with a Householder QR and the distance is read off
the orthogonal projector directly, so agreement with the matrix-free engine is
independent evidence.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import OracleError
from .lattice import LAPLACIAN_DIAGONAL, DiamondVector, PotentialField, centered, shell_grid

logger = logging.getLogger(__name__)

ORACLE_MAX_N = 30


@dataclass(frozen=True)
class DenseBoxOperator:
    box_radius: int
    matrix: np.ndarray

    @property
    def side(self) -> int:
        return 2 * self.box_radius + 1

    def index(self, i: int, j: int) -> int:
        return (i + self.box_radius) * self.side + (j + self.box_radius)

    def basis_vector(self, i: int, j: int) -> np.ndarray:
        vector = np.zeros(self.side * self.side)
        vector[self.index(i, j)] = 1.0
        return vector

    def to_diamond(self, vector: np.ndarray, radius: int) -> DiamondVector:
        grid = centered(vector.reshape(self.side, self.side), radius).copy()
        grid[shell_grid(radius) > radius] = 0.0
        return DiamondVector(radius, grid)

    def asymmetry(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.T)))


def build_dense_operator(
    field: PotentialField,
    box_radius: int,
    diagonal: float = LAPLACIAN_DIAGONAL,
) -> DenseBoxOperator:
    """diagonal + ω on the diagonal, -1 between 4-neighbors inside the box."""
    if box_radius < 1:
        raise OracleError(f"box_radius must be at least 1, got {box_radius}")
    side = 2 * box_radius + 1
    chain = scipy.sparse.diags([-1.0, -1.0], [-1, 1], shape=(side, side))
    eye = scipy.sparse.identity(side)
    hopping = (scipy.sparse.kron(chain, eye) + scipy.sparse.kron(eye, chain)).toarray()

    # the box corners sit on shell 2B
    potential = centered(field.on_diamond(2 * box_radius), box_radius)
    matrix = hopping + np.diag(diagonal + potential.ravel())
    return DenseBoxOperator(box_radius, matrix)


def _check_box(n: int, box_radius: int | None) -> int:
    box = n + 1 if box_radius is None else box_radius
    if box <= n:
        raise OracleError(f"box_radius {box} must exceed n={n} or truncation corrupts the iterates")
    return box


def _krylov_bases(operator: DenseBoxOperator, n: int):
    """Orthonormal bases Q_0 ⊂ Q_1 ⊂ ... ⊂ Q_n of the Krylov prefixes."""
    columns = [operator.basis_vector(0, 0)]
    for k in range(n + 1):
        q, _ = scipy.linalg.qr(np.column_stack(columns), mode="economic")
        yield q
        columns.append(operator.matrix @ q[:, -1])


def oracle_distance_series(field: PotentialField, n: int, box_radius: int | None = None) -> list[float]:
    """dist(δ11, span{H^k δ00 : k <= j}) for j = 0 ... n, by dense projection."""
    if n < 0:
        raise OracleError(f"n must be non-negative, got {n}")
    box = _check_box(n, box_radius)
    operator = build_dense_operator(field, box)
    target = operator.basis_vector(1, 1)

    distances = []
    for q in _krylov_bases(operator, n):
        residual = target - q @ (q.T @ target)
        distances.append(float(np.linalg.norm(residual)))
    logger.debug(f"oracle series c={field.c} seed={field.seed} n={n}: D_n={distances[-1]:.12f}")
    return distances


def oracle_orthogonal_vector(field: PotentialField, k: int, box_radius: int | None = None) -> DiamondVector:
    """m_k = H^k δ00 minus its projection on the order-(k-1) Krylov space."""
    if k < 0:
        raise OracleError(f"k must be non-negative, got {k}")
    box = _check_box(k, box_radius)
    operator = build_dense_operator(field, box)

    power = operator.basis_vector(0, 0)
    for _ in range(k):
        power = operator.matrix @ power
    if k == 0:
        return operator.to_diamond(power, 0)

    bases = list(_krylov_bases(operator, k - 1))
    q = bases[-1]
    return operator.to_diamond(power - q @ (q.T @ power), k)


def engine_discrepancy(field: PotentialField, n: int, box_radius: int | None = None) -> float:
    """Largest |D_k(engine, Gram–Schmidt) - D_k(oracle)| over k = 0 ... n."""
    from .krylov import FullGramSchmidt, run_krylov

    if n > ORACLE_MAX_N:
        raise OracleError(f"oracle comparisons are capped at n={ORACLE_MAX_N}, got {n}")
    reference = oracle_distance_series(field, n, box_radius)
    engine = run_krylov(field, n, FullGramSchmidt()).distances
    if engine.size != len(reference):
        logger.warning(f"engine stopped at step {engine.size - 1} of {n} (c={field.c}, seed={field.seed})")
        return float("inf")
    return float(np.max(np.abs(engine - np.asarray(reference))))

# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""
Orthogonalization of the Krylov sequence H^k δ00 and the distance series

    D^n = sqrt(1 - Σ_{k<=n} <m_k, δ11>^2 / ||m_k||^2).

Every m_k is kept as a unit vector plus its norm: the Bessel terms are
scale-free, while ||m_k||^2 itself overflows double precision after a few
hundred steps.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import ConfigError, KrylovBreakdownError, NumericalDegeneracyError, ScaleOverflowError
from .lattice import LAPLACIAN_DIAGONAL, DiamondVector, PotentialField, centered, stencil

logger = logging.getLogger(__name__)

BREAKDOWN_THRESHOLD = 1e-24
BESSEL_SLACK = 1e-9
DEGENERACY_SLACK = 1e-6
DRIFT_WARNING = 1e-6


@dataclass(frozen=True)
class FullGramSchmidt:
    """Project every new vector against all earlier m_j (twice)."""

    def describe(self) -> str:
        return "gram-schmidt"


@dataclass(frozen=True)
class ThreeTermRecurrence:
    """
    m_{k+1} = H m_k - α_k m_k - β_k m_{k-1}.

    reorthogonalize_every: re-project against stored history every that many steps.
    window: how many past vectors the history keeps (None keeps all of them).
    """
    reorthogonalize_every: int | None = None
    window: int | None = None

    def __post_init__(self):
        if self.reorthogonalize_every is not None and self.reorthogonalize_every < 1:
            raise ConfigError(f"reorthogonalize_every must be positive, got {self.reorthogonalize_every}")
        if self.window is not None and self.window < 1:
            raise ConfigError(f"window must be positive, got {self.window}")

    def describe(self) -> str:
        if self.reorthogonalize_every is None:
            return "lanczos"
        window = "full" if self.window is None else str(self.window)
        return f"lanczos(reorth={self.reorthogonalize_every},window={window})"


OrthogonalizationMode = Union[FullGramSchmidt, ThreeTermRecurrence]


def parse_mode(name: str, reorthogonalize_every: int | None = None, window: int | None = None) -> OrthogonalizationMode:
    key = (name or "").strip().lower().replace("_", "-")
    if key in {"gram-schmidt", "gs", "full"}:
        return FullGramSchmidt()
    if key in {"lanczos", "recurrence", "three-term"}:
        return ThreeTermRecurrence(reorthogonalize_every=reorthogonalize_every, window=window)
    raise ConfigError(f"unknown orthogonalization mode {name!r}")


@dataclass(frozen=True)
class BesselTerm:
    k: int
    bessel_term: float
    partial_sum: float
    distance: float
    alpha: float  # coefficient of m_{k-1} used to build m_k
    beta: float   # coefficient of m_{k-2} used to build m_k
    log_norm_sq: float


@dataclass(frozen=True)
class DistanceSeries:
    c: float
    seed: int
    realization: int
    mode: str
    terms: tuple[BesselTerm, ...]
    breakdown: bool = False
    breakdown_step: int | None = None
    drift: float = 0.0
    diagonal: float = LAPLACIAN_DIAGONAL

    @property
    def n(self) -> int:
        return self.terms[-1].k

    @property
    def distances(self) -> np.ndarray:
        return np.array([t.distance for t in self.terms])

    @property
    def partial_sums(self) -> np.ndarray:
        return np.array([t.partial_sum for t in self.terms])

    @property
    def bessel_terms(self) -> np.ndarray:
        return np.array([t.bessel_term for t in self.terms])


@dataclass(frozen=True)
class KrylovSnapshot:
    """m_k as a unit vector together with its norm."""
    k: int
    unit: DiamondVector
    norm: float
    log_norm_sq: float
    drift: float = 0.0

    def true_scale(self) -> DiamondVector:
        if not math.isfinite(self.norm) or not math.isfinite(self.norm * self.norm):
            raise ScaleOverflowError(self.k)
        return self.unit * self.norm


@dataclass
class _Step:
    k: int
    vector: np.ndarray
    norm: float
    log_norm_sq: float
    bessel_term: float
    alpha: float
    beta: float
    drift: float


def _project_out(w: np.ndarray, history: Iterable[np.ndarray], passes: int = 2) -> None:
    """Modified Gram–Schmidt of w against unit vectors of smaller or equal radius, in place."""
    outer = (w.shape[0] - 1) // 2
    for _ in range(passes):
        for q in history:
            r = (q.shape[0] - 1) // 2
            view = centered(w, r) if r < outer else w
            coef = float(np.sum(q * view))
            view -= coef * q


def _overlap(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape[0] > b.shape[0]:
        a, b = b, a
    return float(np.sum(a * centered(b, (a.shape[0] - 1) // 2)))


def _bessel_numerator(q: np.ndarray) -> float:
    r = (q.shape[0] - 1) // 2
    if r < 2:
        return 0.0
    return float(q[r + 1, r + 1])


@dataclass
class KrylovProcess:
    field: PotentialField
    steps: int
    mode: OrthogonalizationMode = dataclass_field(default_factory=FullGramSchmidt)
    diagonal: float = LAPLACIAN_DIAGONAL
    breakdown_step: int | None = None

    def __iter__(self) -> Iterator[_Step]:
        potential = self.field.on_diamond(max(self.steps, 1))
        q = np.ones((1, 1))
        norm = 1.0
        log_norm_sq = 0.0
        yield _Step(0, q, norm, log_norm_sq, 0.0, math.nan, math.nan, 0.0)

        reference = q
        previous: np.ndarray | None = None
        link = 0.0  # ||m_k|| / ||m_{k-1}||
        gram_schmidt = isinstance(self.mode, FullGramSchmidt)
        reorth_every = None if gram_schmidt else self.mode.reorthogonalize_every
        if gram_schmidt or self.mode.window is None:
            history: list | deque = [q]
        else:
            history = deque([q], maxlen=self.mode.window)

        for k in range(self.steps):
            hq = stencil(q, centered(potential, k), self.diagonal)
            alpha = _overlap(hq, q)
            w = hq.copy()
            if gram_schmidt:
                _project_out(w, history)
            else:
                centered(w, k)[...] -= alpha * q
                if previous is not None:
                    centered(w, k - 1)[...] -= link * previous
                if reorth_every is not None and (k + 1) % reorth_every == 0:
                    _project_out(w, history)

            w_norm = math.sqrt(float(np.sum(w * w)))
            h_norm = math.sqrt(float(np.sum(hq * hq)))
            new_log = log_norm_sq + 2.0 * math.log(w_norm) if w_norm > 0 else -math.inf
            if w_norm * w_norm < BREAKDOWN_THRESHOLD * h_norm * h_norm or new_log < math.log(BREAKDOWN_THRESHOLD):
                self.breakdown_step = k + 1
                logger.warning(f"Krylov breakdown at step {k + 1} (c={self.field.c}, realization={self.field.realization})")
                return

            beta = link * link if previous is not None else 0.0
            older, previous, q = previous, q, w / w_norm
            link = w_norm
            norm *= w_norm
            log_norm_sq = new_log

            drift = max(abs(_overlap(q, reference)), abs(_overlap(q, previous)))
            if older is not None:
                drift = max(drift, abs(_overlap(q, older)))
            if gram_schmidt or reorth_every is not None:
                history.append(q)

            yield _Step(k + 1, q, norm, log_norm_sq, _bessel_numerator(q) ** 2, alpha, beta, drift)


def _require_depth(n: int) -> None:
    if n < 1:
        raise ConfigError(f"Krylov depth n must be at least 1, got {n}")


def run_krylov(
    field: PotentialField,
    n: int,
    mode: OrthogonalizationMode | None = None,
    *,
    diagonal: float = LAPLACIAN_DIAGONAL,
) -> DistanceSeries:
    """
    Distance series D_0 ... D_n for one disorder realization.

    Stops early (breakdown=True) if the Krylov space becomes invariant; raises
    NumericalDegeneracyError if the Bessel sum exceeds 1 + 1e-6.
    """
    _require_depth(n)
    mode = mode or FullGramSchmidt()
    process = KrylovProcess(field, n, mode, diagonal)

    terms: list[BesselTerm] = []
    partial = 0.0
    drift = 0.0
    warned = False
    for step in process:
        partial += step.bessel_term
        if partial > 1.0 + DEGENERACY_SLACK:
            raise NumericalDegeneracyError(step.k, partial)
        if partial > 1.0 + BESSEL_SLACK and not warned:
            logger.warning(f"Bessel sum {partial!r} above 1 at step {step.k} ({mode.describe()})")
            warned = True
        drift = max(drift, step.drift)
        terms.append(BesselTerm(
            k=step.k,
            bessel_term=step.bessel_term,
            partial_sum=partial,
            distance=math.sqrt(max(0.0, 1.0 - partial)),
            alpha=step.alpha,
            beta=step.beta,
            log_norm_sq=step.log_norm_sq,
        ))

    if drift > DRIFT_WARNING:
        logger.warning(f"orthogonality drift {drift:.3e} in {mode.describe()} (c={field.c}, realization={field.realization})")

    return DistanceSeries(
        c=field.c,
        seed=field.seed,
        realization=field.realization,
        mode=mode.describe(),
        terms=tuple(terms),
        breakdown=process.breakdown_step is not None,
        breakdown_step=process.breakdown_step,
        drift=drift,
        diagonal=diagonal,
    )


def krylov_snapshots(
    field: PotentialField,
    ks: Iterable[int],
    mode: OrthogonalizationMode | None = None,
    *,
    diagonal: float = LAPLACIAN_DIAGONAL,
) -> dict[int, KrylovSnapshot]:
    """m_k for every requested k from a single pass."""
    wanted = sorted(set(int(k) for k in ks))
    if not wanted or wanted[0] < 0:
        raise ConfigError(f"snapshot steps must be non-negative, got {wanted}")
    process = KrylovProcess(field, max(wanted[-1], 1), mode or FullGramSchmidt(), diagonal)

    snapshots: dict[int, KrylovSnapshot] = {}
    drift = 0.0
    for step in process:
        drift = max(drift, step.drift)
        if step.k in wanted:
            radius = (step.vector.shape[0] - 1) // 2
            snapshots[step.k] = KrylovSnapshot(
                k=step.k,
                unit=DiamondVector(radius, step.vector),
                norm=step.norm,
                log_norm_sq=step.log_norm_sq,
                drift=drift,
            )
        if step.k >= wanted[-1]:
            break

    missing = [k for k in wanted if k not in snapshots]
    if missing:
        raise KrylovBreakdownError(process.breakdown_step or missing[0])
    return snapshots


def orthogonal_vector(
    field: PotentialField,
    k: int,
    mode: OrthogonalizationMode | None = None,
    *,
    diagonal: float = LAPLACIAN_DIAGONAL,
) -> DiamondVector:
    """The unnormalized Gram–Schmidt vector m_k; its (1,1) entry is <m_k, δ11>."""
    return krylov_snapshots(field, [k], mode, diagonal=diagonal)[k].true_scale()

# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.


import logging

from fastapi import APIRouter, HTTPException, status

from . import config, schemas
from .cache import cached
from .energy import energy_profile, outermost_fraction, peak_shell
from .errors import EstimateError, KrylabError, KrylovBreakdownError, NumericalDegeneracyError, ScaleOverflowError
from .estimate import default_gamma_grid, estimate_series
from .krylov import parse_mode, run_krylov
from .lattice import PotentialField
from .oracle import engine_discrepancy

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api", tags=["Krylov Lab"])

NUMERICAL_FAILURES = (KrylovBreakdownError, NumericalDegeneracyError, ScaleOverflowError)


def _check_depth(n: int):
    if n > config.API_MAX_N:
        raise HTTPException(status_code=400, detail=f"n={n} exceeds the service limit of {config.API_MAX_N}")


def _mode(options: schemas.ModeOptions):
    return parse_mode(options.mode, options.reorthogonalize_every, options.window)


def _fail(exc: KrylabError):
    if isinstance(exc, NUMERICAL_FAILURES):
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))
    raise HTTPException(status_code=400, detail=str(exc))


@cached(key_prefix="distance")
def compute_distance(request: schemas.DistanceRequest) -> schemas.DistanceResponse:
    field = PotentialField(c=request.c, seed=request.seed, realization=request.realization)
    series = run_krylov(field, request.n, _mode(request))

    fit = None
    try:
        grid = default_gamma_grid(request.gamma_min, request.gamma_max, request.gamma_step)
        result = estimate_series(series, grid, request.tail_start)
        fit = schemas.FitOut(
            gamma=result.gamma,
            intercept_y=result.intercept_y,
            sse=result.sse,
            l_lower=result.l_lower,
            tail_start=result.tail_start,
        )
    except EstimateError as exc:
        logger.info(f"distance request without fit: {exc}")

    return schemas.DistanceResponse(
        c=series.c,
        seed=series.seed,
        realization=series.realization,
        mode=series.mode,
        breakdown=series.breakdown,
        breakdown_step=series.breakdown_step,
        drift=series.drift,
        terms=[
            schemas.TermOut(k=t.k, bessel_term=t.bessel_term, partial_sum=t.partial_sum, distance=t.distance)
            for t in series.terms
        ],
        fit=fit,
    )


@router.post("/distance", response_model=schemas.DistanceResponse)
def distance_series(payload: schemas.DistanceRequest):
    _check_depth(payload.n)
    try:
        return compute_distance(payload)
    except KrylabError as exc:
        _fail(exc)


@router.post("/energy", response_model=schemas.EnergyResponse)
def shell_energy_profile(payload: schemas.EnergyRequest):
    _check_depth(payload.k)
    try:
        field = PotentialField(c=payload.c, seed=payload.seed, realization=payload.realization)
        profile = energy_profile(field, payload.k, _mode(payload))
        fractions = profile.cumulative_fractions()
        return schemas.EnergyResponse(
            c=profile.c,
            k=profile.k,
            total=profile.total,
            log_norm_sq=profile.log_norm_sq,
            normalized=profile.normalized,
            peak_shell=peak_shell(profile),
            outermost_fraction=outermost_fraction(profile),
            shells=[
                schemas.ShellOut(s=s, energy=energy, cumulative_fraction=float(fraction))
                for (s, energy), fraction in zip(profile.shells, fractions)
            ],
        )
    except KrylabError as exc:
        _fail(exc)


@router.post("/verify", response_model=schemas.VerifyResponse)
def verify_engine(payload: schemas.VerifyRequest):
    cases = []
    try:
        for c in payload.c_values:
            for seed in range(1, payload.seeds + 1):
                discrepancy = engine_discrepancy(PotentialField(c=c, seed=seed), payload.n)
                cases.append(schemas.VerifyCase(
                    c=c,
                    seed=seed,
                    max_discrepancy=discrepancy,
                    passed=discrepancy <= payload.tolerance,
                ))
    except KrylabError as exc:
        _fail(exc)
    return schemas.VerifyResponse(passed=all(case.passed for case in cases), cases=cases)

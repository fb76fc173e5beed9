"""Request-to-response handlers shared by the HTTP app and the CLI client."""

from __future__ import annotations

import itertools

import numpy as np

from .._parallel import worker_count
from ..benchmark import run_benchmark
from ..diagnostics import overlay_table, qq_ratios
from ..estimation import Method, fit
from ..model import FREE_PARAM_NAMES, WaveParams
from ..nonparam import periodogram, select_frequencies
from ..sampling import (
    QuadratureConfig,
    SamplingScheme,
    TimeSeries,
    default_quadrature,
    difference_series,
)
from ..simulation import effective_quadrature, simulate_gaussian
from ..uncertainty import confidence_intervals, correlation_matrix
from . import schemas


def _resolved_quadrature(quad: QuadratureConfig) -> schemas.QuadratureResolved:
    return schemas.QuadratureResolved(
        m=quad.m, k_folds=quad.k_folds, tail_threshold=quad.tail_threshold
    )


def handle_simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    params = req.theta.to_params()
    scheme = SamplingScheme(delta=req.delta, n=req.n)
    quad = default_quadrature(
        scheme, params,
        m=req.quadrature.m,
        k_folds=req.quadrature.k_folds,
        tail_threshold=req.quadrature.tail_threshold,
    )
    samples, report = simulate_gaussian(
        params, scheme, quad=quad, seed=req.seed, reps=req.reps
    )
    quad = effective_quadrature(quad, report, scheme)
    return schemas.SimulateResponse(
        elevations=[row.tolist() for row in samples],
        delta=req.delta,
        n=req.n,
        seed=req.seed,
        theta=req.theta,
        quadrature=_resolved_quadrature(quad),
        embedding=schemas.EmbeddingModel(
            circulant_size=report.circulant_size,
            min_eigenvalue=report.min_eigenvalue,
            clipped=report.clipped,
        ),
    )


def handle_fit(req: schemas.FitRequest) -> schemas.FitResponse:
    record = TimeSeries.from_values(np.asarray(req.elevations), req.delta)
    method = Method(
        req.method, differenced=req.differenced, segment_len=req.segment_len
    )
    band = (req.omega_min, req.omega_max if req.omega_max is not None else np.inf)
    result = fit(
        record,
        method,
        band=band,
        init=req.init.to_params() if req.init is not None else None,
        ml_max_n=req.ml_max_n,
        quad_m=req.quadrature.m,
        quad_k=req.quadrature.k_folds,
        tail_threshold=req.quadrature.tail_threshold,
    )
    return schemas.FitResponse(
        method=result.method.objective,
        differenced=req.differenced,
        segment_len=req.segment_len,
        theta_hat=schemas.ThetaModel.from_params(result.params),
        init=schemas.ThetaModel.from_params(result.init),
        init_fallback=result.init_fallback,
        objective=result.objective,
        converged=result.converged,
        iterations=result.iterations,
        selection=schemas.SelectionModel(
            omega_min=req.omega_min,
            omega_max=req.omega_max,
            dropped=["zero", "nyquist"],
        ),
        quadrature=_resolved_quadrature(result.quad),
        delta=req.delta,
        n=len(req.elevations),
        seed=req.seed,
    )


def _working_selection(fit_resp: schemas.FitResponse):
    """Rebuild working-grid scheme + selection from a fit's provenance."""
    working_n = fit_resp.n - 1 if fit_resp.differenced else fit_resp.n
    scheme = SamplingScheme(delta=fit_resp.delta, n=working_n)
    omega_max = (
        fit_resp.selection.omega_max
        if fit_resp.selection.omega_max is not None
        else np.inf
    )
    selection = select_frequencies(scheme, fit_resp.selection.omega_min, omega_max)
    return scheme, selection


def handle_ci(req: schemas.CiRequest) -> schemas.CiResponse:
    fit_resp = req.fit
    _, selection = _working_selection(fit_resp)
    quad = QuadratureConfig(
        m=fit_resp.quadrature.m,
        k_folds=fit_resp.quadrature.k_folds,
        tail_threshold=fit_resp.quadrature.tail_threshold,
    )
    params = fit_resp.theta_hat.to_params()
    ci = confidence_intervals(
        params, selection, quad,
        differenced=fit_resp.differenced, level=req.level,
    )
    names = FREE_PARAM_NAMES
    return schemas.CiResponse(
        theta_hat=fit_resp.theta_hat,
        level=ci.level,
        z=ci.z,
        se={name: float(ci.se[i]) for i, name in enumerate(names)},
        intervals={
            name: [float(ci.lower[i]), float(ci.upper[i])]
            for i, name in enumerate(names)
        },
        clipped_lower={
            name: bool(ci.clipped_lower[i]) for i, name in enumerate(names)
        },
        var_theta=ci.sandwich.var_theta.tolist(),
        hessian_expect=ci.sandwich.hessian_expect.tolist(),
        score_var=ci.sandwich.score_var.tolist(),
        pinv_used=ci.pinv_used,
    )


def handle_diagnose(req: schemas.DiagnoseRequest) -> schemas.DiagnoseResponse:
    record = TimeSeries.from_values(np.asarray(req.elevations), req.delta)
    params = req.theta.to_params()
    working = record.demeaned()
    if req.differenced:
        working = difference_series(working)
    scheme = working.scheme
    quad = default_quadrature(
        scheme, params,
        m=req.quadrature.m,
        k_folds=req.quadrature.k_folds,
        tail_threshold=req.quadrature.tail_threshold,
    )
    if req.kind == "qq":
        omega_max = req.omega_max if req.omega_max is not None else np.inf
        selection = select_frequencies(scheme, req.omega_min, omega_max)
        table = qq_ratios(
            periodogram(working), params, selection, quad,
            differenced=req.differenced,
        )
        return schemas.DiagnoseResponse(
            kind="qq",
            qq=schemas.QqPayload(
                empirical=table.empirical.tolist(),
                reference=table.reference.tolist(),
                ks_statistic=table.ks_statistic,
            ),
        )
    if req.kind == "overlay":
        columns = overlay_table(
            periodogram(working), params, quad, differenced=req.differenced
        )
        return schemas.DiagnoseResponse(
            kind="overlay",
            overlay=schemas.OverlayPayload(
                **{key: val.tolist() for key, val in columns.items()}
            ),
        )
    corr = correlation_matrix(params, scheme, quad, differenced=req.differenced)
    positive = np.arange(1, scheme.n // 2 + 1)
    omega = positive * (2.0 * np.pi / (scheme.n * scheme.delta))
    sub = corr[np.ix_(positive, positive)]
    return schemas.DiagnoseResponse(
        kind="corr",
        corr=schemas.CorrPayload(omega=omega.tolist(), matrix=sub.tolist()),
    )


def handle_benchmark(req: schemas.BenchmarkRequest) -> schemas.BenchmarkResponse:
    grid = [
        WaveParams(alpha=a, omega_p=w, gamma=g, r=r)
        for a, w, g, r in itertools.product(
            req.alphas, req.omega_ps, req.gammas, req.rs
        )
    ]
    methods = [
        Method(name, differenced=req.differenced, segment_len=req.segment_len)
        for name in req.methods
    ]
    scheme = SamplingScheme(delta=req.delta, n=req.n)
    band = (req.omega_min, req.omega_max if req.omega_max is not None else np.inf)
    report = run_benchmark(
        grid, scheme, methods, reps=req.reps, seed=req.seed, band=band,
        workers=worker_count(req.workers),
    )
    return schemas.BenchmarkResponse(
        rows=[
            schemas.BenchmarkRowModel(
                method=row.method,
                parameter=row.parameter,
                bias_pct=row.bias_pct,
                sd_pct=row.sd_pct,
                rmse_pct=row.rmse_pct,
            )
            for row in report.rows
        ],
        reps=report.reps,
        n_configs=report.n_configs,
        failures=report.failures,
        wall_time_s=report.wall_time_s,
    )

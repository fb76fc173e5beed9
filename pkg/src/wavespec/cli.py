"""Command-line client of the wavespec service.

Each subcommand builds the same pydantic request the HTTP API accepts and
either dispatches it in-process (default) or posts it to a running server
(``--server http://host:port``). Exit codes: 0 success, 2 configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx
from pydantic import ValidationError

from .errors import ConfigurationError, DomainError, NumericalError
from .service import handlers, schemas

META_FILENAME = "meta.json"

_ENDPOINTS = {
    "/simulate": (handlers.handle_simulate, schemas.SimulateResponse),
    "/fit": (handlers.handle_fit, schemas.FitResponse),
    "/ci": (handlers.handle_ci, schemas.CiResponse),
    "/diagnose": (handlers.handle_diagnose, schemas.DiagnoseResponse),
    "/benchmark": (handlers.handle_benchmark, schemas.BenchmarkResponse),
}


def _dispatch(path: str, request, server: str | None):
    handler, response_cls = _ENDPOINTS[path]
    if server is None:
        return handler(request)
    with httpx.Client(base_url=server, timeout=None) as client:
        resp = client.post(path, json=request.model_dump(mode="json"))
    if resp.status_code >= 500:
        raise NumericalError(_remote_detail(resp))
    if resp.status_code >= 400:
        raise ConfigurationError(_remote_detail(resp))
    return response_cls.model_validate(resp.json())


def _remote_detail(resp: httpx.Response) -> str:
    try:
        return str(resp.json().get("detail", resp.text))
    except ValueError:
        return resp.text


def _fmt(value: float) -> str:
    """Round-trip float formatting (shortest repr, <= 17 significant digits)."""
    return repr(float(value))


def _read_elevations(path: Path) -> list[float]:
    try:
        lines = [line.strip() for line in path.read_text().splitlines() if line.strip()]
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise ConfigurationError(f"{path} is empty")
    start = 0
    try:
        float(lines[0])
    except ValueError:
        start = 1
    try:
        return [float(line) for line in lines[start:]]
    except ValueError as exc:
        raise ConfigurationError(f"{path} is not a one-column elevation CSV: {exc}") from exc


def _sidecar_meta(csv_path: Path) -> dict | None:
    meta_path = csv_path.parent / META_FILENAME
    if meta_path.is_file():
        try:
            return json.loads(meta_path.read_text())
        except (OSError, ValueError):
            return None
    return None


def _resolve_delta(args, csv_path: Path) -> tuple[float, int | None]:
    """Sampling interval from --delta or the sidecar metadata, plus its seed."""
    meta = _sidecar_meta(csv_path)
    seed = meta.get("seed") if meta else None
    if args.delta is not None:
        return args.delta, seed
    if meta and "delta" in meta:
        return float(meta["delta"]), seed
    raise ConfigurationError(
        "--delta is required (no meta.json sidecar found next to the input)"
    )


def _write_json(payload: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload + "\n")
    else:
        print(payload)


def _quadrature_model(args) -> schemas.QuadratureModel:
    return schemas.QuadratureModel(
        m=args.quad_m, k_folds=args.k_folds, tail_threshold=args.tail_threshold
    )


def _theta_model(args) -> schemas.ThetaModel:
    return schemas.ThetaModel(
        alpha=args.alpha, omega_p=args.omega_p, gamma=args.gamma, r=args.r,
        sigma1=args.sigma1, sigma2=args.sigma2, s=args.shape_s,
        smoothing=args.smoothing,
    )


def cmd_simulate(args) -> int:
    request = schemas.SimulateRequest(
        theta=_theta_model(args),
        delta=args.delta,
        n=args.n,
        duration=args.duration,
        reps=args.reps,
        seed=args.seed,
        quadrature=_quadrature_model(args),
    )
    response = _dispatch("/simulate", request, args.server)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for rep, row in enumerate(response.elevations):
        lines = ["elevation"] + [_fmt(v) for v in row]
        (out_dir / f"rep_{rep:04d}.csv").write_text("\n".join(lines) + "\n")
    meta = {
        "theta": response.theta.model_dump(),
        "delta": response.delta,
        "n": response.n,
        "seed": response.seed,
        "reps": len(response.elevations),
        "quadrature": response.quadrature.model_dump(),
        "embedding": response.embedding.model_dump(),
    }
    (out_dir / META_FILENAME).write_text(json.dumps(meta, indent=2) + "\n")
    print(f"wrote {len(response.elevations)} record(s) of n={response.n} to {out_dir}")
    return 0


def cmd_fit(args) -> int:
    csv_path = Path(args.input)
    delta, seed = _resolve_delta(args, csv_path)
    request = schemas.FitRequest(
        elevations=_read_elevations(csv_path),
        delta=delta,
        method=args.method,
        differenced=args.difference,
        segment_len=args.segment_len,
        omega_min=args.omega_min,
        omega_max=args.omega_max,
        quadrature=_quadrature_model(args),
        ml_max_n=args.ml_max_n,
        seed=seed,
    )
    response = _dispatch("/fit", request, args.server)
    _write_json(response.model_dump_json(indent=2), args.out)
    return 0


def cmd_ci(args) -> int:
    fit_path = Path(args.fit_json)
    try:
        fit_response = schemas.FitResponse.model_validate_json(fit_path.read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read {fit_path}: {exc}") from exc
    request = schemas.CiRequest(fit=fit_response, level=args.level)
    response = _dispatch("/ci", request, args.server)
    _write_json(response.model_dump_json(indent=2), args.out)
    return 0


def _write_csv(out: str, header: list[str], columns: list[list[float]]) -> None:
    rows = zip(*columns)
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    Path(out).write_text("\n".join(lines) + "\n")


def cmd_diagnose(args) -> int:
    csv_path = Path(args.input)
    try:
        fit_response = schemas.FitResponse.model_validate_json(
            Path(args.fit_json).read_text()
        )
    except OSError as exc:
        raise ConfigurationError(f"cannot read {args.fit_json}: {exc}") from exc
    delta = args.delta if args.delta is not None else fit_response.delta
    request = schemas.DiagnoseRequest(
        elevations=_read_elevations(csv_path),
        delta=delta,
        theta=fit_response.theta_hat,
        kind=args.kind,
        differenced=fit_response.differenced,
        omega_min=fit_response.selection.omega_min,
        omega_max=fit_response.selection.omega_max,
        quadrature=schemas.QuadratureModel(
            m=fit_response.quadrature.m,
            k_folds=fit_response.quadrature.k_folds,
            tail_threshold=fit_response.quadrature.tail_threshold,
        ),
    )
    response = _dispatch("/diagnose", request, args.server)
    if response.kind == "qq":
        _write_csv(
            args.out,
            ["exp1_quantile", "empirical_quantile"],
            [response.qq.reference, response.qq.empirical],
        )
        print(f"ks_statistic={response.qq.ks_statistic!r}")
    elif response.kind == "overlay":
        overlay = response.overlay
        _write_csv(
            args.out,
            [
                "omega",
                "periodogram",
                "expected_periodogram",
                "periodogram_db",
                "expected_periodogram_db",
            ],
            [
                overlay.omega,
                overlay.periodogram,
                overlay.expected_periodogram,
                overlay.periodogram_db,
                overlay.expected_periodogram_db,
            ],
        )
    else:
        corr = response.corr
        header = ["omega"] + [_fmt(w) for w in corr.omega]
        lines = [",".join(header)]
        for w, row in zip(corr.omega, corr.matrix):
            lines.append(",".join([_fmt(w)] + [_fmt(v) for v in row]))
        Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote {args.kind} table to {args.out}")
    return 0


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def cmd_benchmark(args) -> int:
    request = schemas.BenchmarkRequest(
        alphas=_float_list(args.alpha),
        omega_ps=_float_list(args.omega_p),
        gammas=_float_list(args.gamma),
        rs=_float_list(args.r),
        methods=[tok.strip() for tok in args.methods.split(",") if tok.strip()],
        differenced=args.difference,
        segment_len=args.segment_len,
        delta=args.delta,
        n=args.n,
        duration=args.duration,
        reps=args.reps,
        seed=args.seed,
        omega_min=args.omega_min,
        omega_max=args.omega_max,
        workers=args.workers,
    )
    response = _dispatch("/benchmark", request, args.server)
    header = ["method", "parameter", "bias_pct", "sd_pct", "rmse_pct"]
    lines = [",".join(header)]
    for row in response.rows:
        lines.append(
            ",".join(
                [row.method, row.parameter]
                + [_fmt(v) for v in (row.bias_pct, row.sd_pct, row.rmse_pct)]
            )
        )
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(
        f"benchmark: {response.n_configs} config(s) x {response.reps} rep(s), "
        f"{response.failures} failure(s), {response.wall_time_s:.1f}s -> {args.out}"
    )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running wavespec server; default runs in-process",
    )


def _add_quadrature(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--quad-m", type=int, default=None,
                        help="quadrature grid size (default max(8192, 2n))")
    parser.add_argument("--k-folds", type=int, default=None,
                        help="aliasing fold count (default from tail threshold)")
    parser.add_argument("--tail-threshold", type=float, default=1e-6,
                        help="density threshold that sets the default fold count")


def _add_theta(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, required=True, help="energy scale")
    parser.add_argument("--omega-p", type=float, required=True,
                        help="peak angular frequency, rad/s")
    parser.add_argument("--gamma", type=float, required=True,
                        help="peak enhancement factor (>= 1)")
    parser.add_argument("--r", type=float, required=True, help="tail decay index (> 1)")
    parser.add_argument("--sigma1", type=float, default=0.07)
    parser.add_argument("--sigma2", type=float, default=0.09)
    parser.add_argument("--shape-s", type=float, default=4.0)
    parser.add_argument("--smoothing", type=float, default=None,
                        help="arctan width-profile steepness (default: step profile)")


def _add_band(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--omega-min", type=float, default=0.0,
                        help="lowest |omega| kept in the fit, rad/s")
    parser.add_argument("--omega-max", type=float, default=None,
                        help="highest |omega| kept in the fit, rad/s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavespec",
        description="Fit, simulate, and diagnose parametric ocean-wave spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="simulate Gaussian wave records")
    _add_theta(p_sim)
    p_sim.add_argument("--delta", type=float, required=True,
                       help="sampling interval, seconds")
    group = p_sim.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="record length in samples")
    group.add_argument("--duration", type=float, help="record duration in seconds")
    p_sim.add_argument("--reps", type=int, default=1)
    p_sim.add_argument("--seed", type=int, default=0)
    _add_quadrature(p_sim)
    p_sim.add_argument("--out", required=True, help="output directory")
    _add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_fit = sub.add_parser("fit", help="fit spectrum parameters to a record")
    p_fit.add_argument("input", help="elevation CSV, one value per line")
    p_fit.add_argument("--delta", type=float, default=None,
                       help="sampling interval (falls back to meta.json sidecar)")
    p_fit.add_argument("--method", default="dw",
                       help="ls | bls | whittle | aliased_whittle | dw | ml")
    p_fit.add_argument("--difference", action="store_true",
                       help="fit on the first-differenced record")
    p_fit.add_argument("--segment-len", type=int, default=None,
                       help="Bartlett segment length (default round(100/delta))")
    _add_band(p_fit)
    _add_quadrature(p_fit)
    p_fit.add_argument("--ml-max-n", type=int, default=4096,
                       help="record-length cap for the exact Gaussian likelihood")
    p_fit.add_argument("--out", default=None, help="fit JSON path (default stdout)")
    _add_common(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_ci = sub.add_parser("ci", help="sandwich-variance confidence intervals")
    p_ci.add_argument("fit_json", help="fit JSON produced by `wavespec fit`")
    p_ci.add_argument("--level", type=float, default=0.95)
    p_ci.add_argument("--out", default=None, help="CI JSON path (default stdout)")
    _add_common(p_ci)
    p_ci.set_defaults(func=cmd_ci)

    p_diag = sub.add_parser("diagnose", help="model-adequacy tables")
    p_diag.add_argument("input", help="elevation CSV, one value per line")
    p_diag.add_argument("--fit", dest="fit_json", required=True,
                        help="fit JSON with the parameters to diagnose")
    p_diag.add_argument("--kind", choices=("qq", "corr", "overlay"), default="qq")
    p_diag.add_argument("--delta", type=float, default=None,
                        help="sampling interval (default: from the fit JSON)")
    p_diag.add_argument("--out", required=True, help="output CSV path")
    _add_common(p_diag)
    p_diag.set_defaults(func=cmd_diagnose)

    p_bench = sub.add_parser("benchmark", help="Monte Carlo estimator comparison")
    p_bench.add_argument("--alpha", default="0.7", help="comma list of true alpha")
    p_bench.add_argument("--omega-p", default="0.7", help="comma list of true omega_p")
    p_bench.add_argument("--gamma", default="3.3", help="comma list of true gamma")
    p_bench.add_argument("--r", default="4", help="comma list of true r")
    p_bench.add_argument("--methods", default="ls,bls,dw", help="comma list of methods")
    p_bench.add_argument("--difference", action="store_true")
    p_bench.add_argument("--segment-len", type=int, default=None)
    p_bench.add_argument("--delta", type=float, required=True)
    group = p_bench.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int)
    group.add_argument("--duration", type=float)
    p_bench.add_argument("--reps", type=int, default=10)
    p_bench.add_argument("--seed", type=int, default=0)
    _add_band(p_bench)
    p_bench.add_argument("--workers", type=int, default=None,
                         help="worker processes (capped by WAVESPEC_THREADS)")
    p_bench.add_argument("--out", required=True, help="report CSV path")
    _add_common(p_bench)
    p_bench.set_defaults(func=cmd_benchmark)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: invalid request: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except httpx.HTTPError as exc:
        print(f"server error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

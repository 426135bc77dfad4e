"""FastAPI compute service wrapping the core package.

Every table the CLI prints is rendered to CSV here, server side, so a
thin client receives the exact bytes regardless of transport.  Domain
errors map to HTTP 400; failed internal invariants surface as 500.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .. import qudit, sweeps
from ..environment import EnvSpec, classify, omega_eb
from ..errors import EbreakError
from ..gaussian import parse_cm_text
from .models import (
    CurvesRequest,
    DiscordRequest,
    EnvMapRequest,
    EprVariancesRequest,
    PointRequest,
    QuditDephaseRequest,
    QuditDepolarizeRequest,
    QuditDilateRequest,
    QuditStateRequest,
    QuditStateSpec,
    QuditTwirlRequest,
    ReactivationMapRequest,
    ReportResponse,
    TableResponse,
    ThresholdsRequest,
)

app = FastAPI(title="ebreak", version="0.1.0",
              description="Entanglement reactivation in correlated-noise "
                          "environments: maps, thresholds, budgets and "
                          "twirling checks.")


@app.exception_handler(EbreakError)
async def _domain_error(_: Request, exc: EbreakError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _table_response(req, columns, rows):
    if req.format == "csv":
        return Response(content=sweeps.render_csv(columns, rows),
                        media_type="text/csv")
    return TableResponse(config=req.model_dump(), columns=list(columns),
                         values=sweeps.table_values(columns, rows))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/tables/env-map")
def env_map(req: EnvMapRequest):
    rows = sweeps.env_map_table(req.omega, req.grid_n, req.range)
    return _table_response(req, sweeps.ENV_MAP_COLUMNS, rows)


@app.post("/tables/reactivation-map")
def reactivation_map(req: ReactivationMapRequest):
    rows = sweeps.reactivation_map_table(req.tau, req.grid_n, req.range)
    return _table_response(req, sweeps.REACTIVATION_COLUMNS, rows)


@app.post("/tables/thresholds")
def thresholds_endpoint(req: ThresholdsRequest):
    rows = sweeps.thresholds_table(req.family, req.tau_values)
    return _table_response(req, sweeps.THRESHOLDS_COLUMNS, rows)


@app.post("/tables/curves")
def curves(req: CurvesRequest):
    rows = sweeps.curves_table(req.family, req.tau, req.points)
    return _table_response(req, sweeps.CURVES_COLUMNS, rows)


@app.post("/reports/discord", response_model=ReportResponse)
def discord_endpoint(req: DiscordRequest):
    cm = parse_cm_text(req.cm_text) if req.cm_text else None
    report = sweeps.discord_report(cm=cm, omega=req.omega, g=req.g,
                                   g_prime=req.gp, method=req.method)
    return ReportResponse(config=req.model_dump(), report=report)


@app.post("/reports/epr-variances", response_model=ReportResponse)
def epr_variances(req: EprVariancesRequest):
    report = sweeps.epr_variances_report(req.tau, req.omega, req.g, req.gp, req.mu)
    return ReportResponse(config=req.model_dump(), report=report)


@app.post("/reports/point", response_model=ReportResponse)
def point(req: PointRequest):
    w = omega_eb(req.tau) if req.omega == "eb" else float(req.omega)
    env = EnvSpec(w, req.g, req.gp, req.tau)
    report = sweeps.point_report(env, req.mu)
    report["class"] = classify(env).letter
    return ReportResponse(config=req.model_dump(), report=report)


# ---------------------------------------------------------------------------
# qudit reports


def _build_state(spec: QuditStateSpec) -> qudit.DensityMatrix:
    if spec.kind == "werner":
        if spec.gamma is not None and spec.d == 2:
            return qudit.qubit_werner_state(spec.gamma)
        if spec.mu is None:
            raise EbreakError("werner state needs mu (or gamma for d = 2)")
        return qudit.werner_state(spec.d, spec.mu)
    if spec.kind == "isotropic":
        if spec.gamma is None:
            raise EbreakError("isotropic state needs gamma")
        return qudit.isotropic_state(spec.d, spec.gamma)
    if spec.kind == "triplet":
        return qudit.triplet_state()
    return qudit.random_density_matrix((spec.d, spec.d), spec.seed)


@app.post("/qudit/state", response_model=ReportResponse)
def qudit_state(req: QuditStateRequest):
    rho = _build_state(req.state)
    min_pt = qudit.min_pt_eigenvalue(rho)
    report = {
        "dims": list(rho.dims),
        "min_pt_eigenvalue": min_pt,
        "npt": min_pt < -1e-10,
    }
    if rho.dims[0] * rho.dims[1] <= 16:
        report["state"] = qudit.density_matrix_to_json(rho)
    return ReportResponse(config=req.model_dump(), report=report)


@app.post("/qudit/twirl", response_model=ReportResponse)
def qudit_twirl(req: QuditTwirlRequest):
    rho = _build_state(req.state)
    twirled = qudit.twirl(rho, req.mode, req.method, req.samples, req.seed)
    deviation = float(np.max(np.abs(twirled.matrix - rho.matrix)))
    report = {
        "mode": req.mode,
        "method": req.method,
        "max_deviation_from_input": deviation,
        "is_fixed_point": deviation < 1e-12,
        "min_pt_eigenvalue": qudit.min_pt_eigenvalue(twirled),
    }
    if req.state.d == 2 and req.method != "design":
        exact = qudit.twirl(rho, req.mode, "design")
        report["trace_distance_to_design"] = qudit.trace_distance(twirled, exact)
    if req.state.d == 2:
        report["twirled_state"] = qudit.density_matrix_to_json(twirled)
    return ReportResponse(config=req.model_dump(), report=report)


@app.post("/qudit/depolarize", response_model=ReportResponse)
def qudit_depolarize(req: QuditDepolarizeRequest):
    rho = qudit.triplet_state()
    out = qudit.one_side_depolarize(rho, req.probs)
    spectrum = [float(x) for x in qudit.pt_spectrum(out)]
    expected = sorted(0.5 - p for p in req.probs)
    report = {
        "eb": qudit.depolarizing_is_eb(req.probs),
        "min_pt_eigenvalue": spectrum[0],
        "pt_spectrum": spectrum,
        "matches_half_minus_p": bool(
            max(abs(a - b) for a, b in zip(spectrum, expected)) < 1e-12
        ),
    }
    return ReportResponse(config=req.model_dump(), report=report)


@app.post("/qudit/dephase", response_model=ReportResponse)
def qudit_dephase(req: QuditDephaseRequest):
    rho = qudit.random_density_matrix((req.d, req.d), req.seed)
    out = qudit.fock_dephase(rho)
    again = qudit.fock_dephase(out)
    report = {
        "ppt": qudit.is_ppt(out),
        "min_pt_eigenvalue": qudit.min_pt_eigenvalue(out),
        "idempotent": bool(np.max(np.abs(again.matrix - out.matrix)) < 1e-14),
    }
    return ReportResponse(config=req.model_dump(), report=report)


@app.post("/qudit/dilate", response_model=ReportResponse)
def qudit_dilate(req: QuditDilateRequest):
    if req.design == "clifford":
        channel = qudit.clifford_design_channel(req.mode)
    elif req.probs is not None:
        channel = qudit.correlated_pauli_channel(req.probs)
    else:
        raise EbreakError("dilate needs probs or design='clifford'")
    _, verdict = qudit.dilate_and_check(channel)
    report = {
        "environment_size": channel.size,
        "max_deviation": verdict.max_deviation,
        "zero_discord": verdict.zero_discord,
        "passed": verdict.passed,
    }
    return ReportResponse(config=req.model_dump(), report=report)

"""FastAPI application exposing the compute runs.

Handlers are plain functions (FastAPI runs them in a worker thread), and
the process keeps the bifurcation-value cache warm across requests.
Computational failures come back as HTTP 200 with the `error` field set
(and, for continuation, any partial results); only malformed requests
produce 4xx.
"""

from fastapi import FastAPI

from .. import runs
from ..errors import (ConsistencyError, DegenerateDataError, DomainError,
                      EnvelopeError, NonConvergenceError, RootSearchError,
                      SolvabilityError)
from . import schemas

_COMPUTE_ERRORS = (ConsistencyError, DegenerateDataError, DomainError,
                   EnvelopeError, NonConvergenceError, RootSearchError,
                   SolvabilityError)


def create_app():
    app = FastAPI(
        title="helmbif",
        description=("Bifurcation branches of planar overdetermined "
                     "Helmholtz problems on perturbed disks"),
        version="0.1.0",
    )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/v1/mu-table", response_model=schemas.MuTableResponse)
    def mu_table(request: schemas.MuTableRequest):
        try:
            result = runs.run_mu_table(request.m_min, request.m_max,
                                       fmt=request.fmt)
        except _COMPUTE_ERRORS as exc:
            return schemas.MuTableResponse(rows=[], files={}, error=str(exc))
        return schemas.MuTableResponse(**result)

    @app.post("/v1/verify", response_model=schemas.VerifyResponse)
    def verify(request: schemas.VerifyRequest):
        try:
            result = runs.run_verify(request.m_max)
        except _COMPUTE_ERRORS as exc:
            return schemas.VerifyResponse(error=str(exc))
        return schemas.VerifyResponse(**result)

    @app.post("/v1/scaling", response_model=schemas.ScalingResponse)
    def scaling(request: schemas.ScalingRequest):
        try:
            result = runs.run_scaling(request.m, request.eps_list,
                                      control_offset=request.control_offset,
                                      modes=request.modes, fmt=request.fmt)
        except _COMPUTE_ERRORS as exc:
            return schemas.ScalingResponse(error=str(exc))
        return schemas.ScalingResponse(**result)

    @app.post("/v1/branch", response_model=schemas.BranchResponse)
    def branch(request: schemas.BranchRequest):
        try:
            result = runs.run_branch(request.m, request.eps_target,
                                     request.steps, request.shape_modes,
                                     tol=request.tol, modes=request.modes)
        except _COMPUTE_ERRORS as exc:
            return schemas.BranchResponse(error=str(exc))
        # A stalled continuation is reported both in `failure` and in
        # `error` so thin clients can map it to a nonzero exit without
        # inspecting the payload.
        error = result["failure"]["failure"] if result["failure"] else None
        return schemas.BranchResponse(points=result["points"],
                                      failure=result["failure"],
                                      files=result["files"], error=error)

    @app.post("/v1/figure", response_model=schemas.FigureResponse)
    def figure(request: schemas.FigureRequest):
        try:
            result = runs.run_figure(request.m_list, request.eps,
                                     grid_n=request.grid_n,
                                     first_order=request.first_order,
                                     modes=request.modes, tol=request.tol,
                                     steps=request.steps)
        except _COMPUTE_ERRORS as exc:
            return schemas.FigureResponse(error=str(exc))
        return schemas.FigureResponse(**result)

    return app


app = create_app()

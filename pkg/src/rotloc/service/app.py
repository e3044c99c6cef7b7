"""HTTP routes of the compute service."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ConvergenceError, DomainBoundError, SignConventionError
from . import handlers, schemas


def create_app() -> FastAPI:
    app = FastAPI(
        title="rotloc",
        description="Fermion localization radii in rotating electromagnetic "
                    "fields: characteristic roots, exact-wavefunction checks, "
                    "and lab/rotating-frame localization computations.",
        version="0.1.0",
    )

    @app.exception_handler(DomainBoundError)
    @app.exception_handler(SignConventionError)
    async def _domain_error(request: Request, exc: Exception):
        return JSONResponse(
            status_code=400,
            content={"error_type": "domain", "detail": str(exc)},
        )

    @app.exception_handler(ConvergenceError)
    async def _convergence_error(request: Request, exc: ConvergenceError):
        return JSONResponse(
            status_code=400,
            content={
                "error_type": "convergence",
                "detail": str(exc),
                "last_estimates": list(exc.last_estimates or ()),
            },
        )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return handlers.health()

    @app.post("/params/normalize", response_model=schemas.NormalizeResponse)
    def normalize(req: schemas.NormalizeRequest):
        return handlers.normalize(req)

    @app.post("/roots", response_model=schemas.RootsResponse)
    def roots(req: schemas.RootsRequest):
        return handlers.roots(req)

    @app.post("/localize/lab", response_model=schemas.LocalizeLabResponse)
    def localize_lab(req: schemas.LocalizeLabRequest):
        return handlers.localize_lab(req)

    @app.post("/localize/rot", response_model=schemas.LocalizeRotResponse)
    def localize_rot(req: schemas.LocalizeRotRequest):
        return handlers.localize_rot(req)

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest):
        return handlers.sweep(req)

    @app.post("/verify/dirac", response_model=schemas.VerifyDiracResponse)
    def verify_dirac(req: schemas.VerifyDiracRequest):
        return handlers.verify_dirac(req)

    @app.post("/verify/ode", response_model=schemas.VerifyOdeResponse)
    def verify_ode(req: schemas.VerifyOdeRequest):
        return handlers.verify_ode(req)

    @app.post("/verify/transform", response_model=schemas.VerifyTransformResponse)
    def verify_transform(req: schemas.VerifyTransformRequest):
        return handlers.verify_transform(req)

    @app.post("/transform", response_model=schemas.TransformResponse)
    def transform(req: schemas.TransformRequest):
        return handlers.transform(req)

    @app.post("/wavefunction", response_model=schemas.WavefunctionResponse)
    def wavefunction_at(req: schemas.WavefunctionRequest):
        return handlers.wavefunction_at(req)

    return app


app = create_app()

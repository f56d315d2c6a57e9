"""HTTP service wrapping the core package.

Run with: uvicorn grayorder.service.app:app
The CLI does not talk to this service; it links the library directly.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import math

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .. import __version__
from ..baseline import BaselineKind, BaselineSpec, absolute_order, generate
from ..distribution import build
from ..errors import GrayOrderError, MalformedFile
from ..features import FeatureKind, extract
from ..ingest import (
    PixelGrid,
    boustrophedon,
    decode_auto,
    decode_grayscale,
    encode_pgm,
    row_major,
)
from ..order import ImageRef, Mode, Reference, compare
from ..renorm import RenormMethod
from ..report import report_to_dict
from .schemas import (
    AbsoluteRequest,
    AbsoluteResponse,
    BaselineRequest,
    BaselineResponse,
    CompareRequest,
    CompareResponse,
    HealthResponse,
    HistBin,
    HistRequest,
    HistResponse,
    ImagePayload,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="grayorder",
        version=__version__,
        description="Relative degree of order of grayscale images.",
    )

    @app.exception_handler(GrayOrderError)
    async def _domain_error(request, exc: GrayOrderError):
        return JSONResponse(
            status_code=400,
            content={"detail": {"error": type(exc).__name__, "message": str(exc)}},
        )

    @app.get("/v1/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/compare", response_model=CompareResponse)
    def compare_images(request: CompareRequest):
        grid_a, ref_a = _decode_payload(request.image_a)
        grid_b, ref_b = _decode_payload(request.image_b)
        modes = None
        if request.modes is not None:
            try:
                modes = [Mode.parse(text) for text in request.modes]
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
        report = compare(
            grid_a,
            grid_b,
            modes=modes,
            epsilon=request.epsilon,
            strict=request.strict,
            ref_a=ref_a,
            ref_b=ref_b,
        )
        return CompareResponse.model_validate(report_to_dict(report))

    @app.post("/v1/hist", response_model=HistResponse)
    def histogram(request: HistRequest):
        grid, _ = _decode_payload(request.image)
        traverse = boustrophedon if request.traversal == "boustrophedon" else row_major
        stream = extract(traverse(grid), FeatureKind(request.feature))
        dist = build(stream)
        return HistResponse(
            feature=request.feature,
            traversal=request.traversal,
            sample_count=stream.count,
            bins=[
                HistBin(bin_index=i, bin_level=float(level), mass=float(mass))
                for i, (level, mass) in enumerate(zip(dist.levels, dist.masses))
            ],
        )

    @app.post("/v1/baseline", response_model=BaselineResponse)
    def baseline(request: BaselineRequest):
        grid = generate(_baseline_spec(request))
        pgm = encode_pgm(grid)
        return BaselineResponse(
            width=grid.width,
            height=grid.height,
            sha256=hashlib.sha256(pgm).hexdigest(),
            pgm_b64=base64.b64encode(pgm).decode("ascii"),
        )

    @app.post("/v1/absolute", response_model=AbsoluteResponse)
    def absolute(request: AbsoluteRequest):
        grid, _ = _decode_payload(request.image)
        mode = Mode(
            FeatureKind(request.feature),
            RenormMethod(request.renorm),
            Reference.FIRST,  # the baseline is always the reference
        )
        value = absolute_order(
            grid,
            _baseline_spec(request.baseline),
            mode,
            epsilon=request.epsilon,
            strict=request.strict,
            ideal=request.ideal,
        )
        return AbsoluteResponse(
            delta_s=value.delta_s,
            kl="inf" if math.isinf(value.kl) else value.kl,
            forms_agree=value.forms_agree,
            support_mismatch_mass=value.support_mismatch_mass,
        )

    return app


def _baseline_spec(request: BaselineRequest) -> BaselineSpec:
    return BaselineSpec(
        kind=BaselineKind(request.kind),
        width=request.width,
        height=request.height,
        seed=request.seed,
        level=request.level,
    )


def _decode_payload(payload: ImagePayload) -> tuple[PixelGrid, ImageRef]:
    try:
        raw = base64.b64decode(payload.content_b64, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise MalformedFile(f"invalid base64 image payload: {exc}") from None
    if payload.format is None:
        grid = decode_auto(raw)
    else:
        grid = decode_grayscale(raw, payload.format)
    return grid, ImageRef(payload.name, hashlib.sha256(raw).hexdigest())


app = create_app()

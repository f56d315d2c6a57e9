"""Pydantic request/response models for the HTTP service.

Images travel as base64 payloads inside JSON bodies. The response mirrors
the report schema the CLI emits; an infinite divergence is the string "inf"
because JSON has no infinity.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field


class ImagePayload(BaseModel):
    content_b64: str
    format: Optional[Literal["png", "pgm", "bmp"]] = None  # None: sniff magic bytes
    name: str = "<inline>"


class CompareRequest(BaseModel):
    image_a: ImagePayload
    image_b: ImagePayload
    strict: bool = True
    epsilon: float = Field(0.0, ge=0.0)
    modes: Optional[List[str]] = None  # feature:renorm:reference triples; None = all 32


class ImageDigest(BaseModel):
    path: str
    sha256: str


class ReportEntry(BaseModel):
    feature: str
    renorm: str
    reference: str
    delta_s: Optional[float] = None
    kl: Optional[Union[float, Literal["inf"]]] = None
    support_mismatch_mass: Optional[float] = None
    residual_mean_gap: Optional[float] = None
    clipped_mass: Optional[float] = None
    skipped: bool
    skip_reason: Optional[str] = None


class CompareResponse(BaseModel):
    image_a: ImageDigest
    image_b: ImageDigest
    epsilon: float
    strict: bool
    headline: Optional[ReportEntry] = None
    entries: List[ReportEntry]


class HistRequest(BaseModel):
    image: ImagePayload
    feature: Literal["gray", "diff", "absdiff", "ratio"]
    traversal: Literal["boustrophedon", "rowmajor"] = "boustrophedon"


class HistBin(BaseModel):
    bin_index: int
    bin_level: float
    mass: float


class HistResponse(BaseModel):
    feature: str
    traversal: str
    sample_count: int
    bins: List[HistBin]


class BaselineRequest(BaseModel):
    kind: Literal["noise", "black"]
    width: int = Field(ge=1)
    height: int = Field(ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    level: int = Field(0, ge=0, le=255)


class BaselineResponse(BaseModel):
    width: int
    height: int
    sha256: str
    pgm_b64: str


class AbsoluteRequest(BaseModel):
    image: ImagePayload
    baseline: BaselineRequest
    feature: Literal["gray", "diff", "absdiff", "ratio"] = "gray"
    renorm: Literal["mass", "shift", "opposed", "scale"] = "mass"
    epsilon: float = Field(0.0, ge=0.0)
    strict: bool = True
    ideal: bool = False  # compare against the exact process distribution


class AbsoluteResponse(BaseModel):
    delta_s: float
    kl: Union[float, Literal["inf"]]
    forms_agree: bool
    support_mismatch_mass: float


class HealthResponse(BaseModel):
    status: str
    version: str

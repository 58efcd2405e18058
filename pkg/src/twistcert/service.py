"""FastAPI service wrapping the core package.

Every endpoint is a stateless adapter over the same report builders
the CLI uses, so a certificate fetched over HTTP is byte-identical to
one produced on the command line.  Run with:

    uvicorn twistcert.service:app
"""

from __future__ import annotations

import functools

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .curve import make_curve
from .cli import parse_field
from .errors import (
    HypothesisFailed,
    NotFullTorsion,
    SearchExhausted,
    SingularCurve,
    TwistCertError,
    VerificationFailed,
)
from .reports import classify_report, forge_report, local_report, verify_document


class CurveIn(BaseModel):
    A: int
    B: int


class ClassifyRequest(BaseModel):
    curve: CurveIn
    D: int
    bound: int = Field(default=1000, ge=2)
    threads: int = Field(default=1, ge=1)


class ClassifyRow(BaseModel):
    prime: str
    good_for_E: bool
    torsion_dim: str | None
    splitting_in_K: str


class ClassifyResponse(BaseModel):
    curve: dict
    D: str
    bound: str
    rows: list[ClassifyRow]
    densities: dict
    warnings: list[str]


class ForgeRequest(BaseModel):
    curve: CurveIn
    D: int
    r: int = Field(ge=0)
    bound: int = Field(default=10**6, ge=2)
    c: int | None = None
    rank_d: int | None = None
    rank_dD: int | None = None


class CertificateOut(BaseModel):
    certificate: dict


class VerifyRequest(BaseModel):
    certificate: dict


class VerifyResponse(BaseModel):
    ok: bool
    detail: str | None = None


class LocalRequest(BaseModel):
    curve: CurveIn
    q: int
    D: int | None = None
    twist_class: str | None = None


class HealthResponse(BaseModel):
    status: str
    version: str


def _domain_errors(fn):
    @functools.wraps(fn)
    def wrapped(*a, **kw):
        try:
            return fn(*a, **kw)
        except SearchExhausted as exc:
            raise HTTPException(status_code=409, detail=f"search exhausted: {exc}")
        except VerificationFailed as exc:
            raise HTTPException(status_code=409, detail=f"verification failed: {exc}")
        except (HypothesisFailed, SingularCurve, NotFullTorsion) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (TwistCertError, ValueError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    return wrapped


def create_app() -> FastAPI:
    app = FastAPI(
        title="twistcert",
        description="Quadratic twist construction with verifiable 2-Selmer "
        "certificates over quadratic fields.",
        version=__version__,
    )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/api/classify", response_model=ClassifyResponse)
    @_domain_errors
    def classify(req: ClassifyRequest):
        E = make_curve(req.curve.A, req.curve.B)
        K, warning = parse_field(req.D)
        report = classify_report(E, K, req.bound, threads=req.threads)
        if warning:
            report["warnings"].insert(0, warning)
        return report

    @app.post("/api/forge", response_model=CertificateOut)
    @_domain_errors
    def forge(req: ForgeRequest):
        if (req.rank_d is None) != (req.rank_dD is None):
            raise HTTPException(
                status_code=422, detail="rank_d and rank_dD must be supplied together"
            )
        E = make_curve(req.curve.A, req.curve.B)
        K, _ = parse_field(req.D)
        doc = forge_report(E, K, req.r, req.bound, req.c, req.rank_d, req.rank_dD)
        return CertificateOut(certificate=doc)

    @app.post("/api/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        try:
            ok, detail = verify_document(req.certificate)
        except (KeyError, ValueError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=f"malformed certificate: {exc}")
        return VerifyResponse(ok=ok, detail=detail)

    @app.post("/api/local")
    @_domain_errors
    def local(req: LocalRequest):
        E = make_curve(req.curve.A, req.curve.B)
        return local_report(E, req.q, D=req.D, twist_class=req.twist_class)

    return app


app = create_app()

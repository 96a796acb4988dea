"""HTTP service exposing the computations behind the CLI.

Every endpoint accepts a request carrying the run configuration plus
command-specific parameters and returns the same report envelope the CLI
prints, so long verification batteries can be driven by several clients
against one warm process (engine caches persist between requests).

Run with:  uvicorn suq2.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .cli import RunConfig, UsageError, dispatch
from .parsing import ParseError
from .zeta import StabilizationError

app = FastAPI(title="suq2", description="Spectral-triple computations for "
                                         "the quantum group SU_q(2)")


class ConfigModel(BaseModel):
    q: str = "0.5"
    mode: str = "numeric"
    epsilon: float = 1.0
    tol: float = 1e-10
    n_max: int | None = None
    output: str = "json"
    seed: int = 0


class CommandRequest(BaseModel):
    config: ConfigModel = Field(default_factory=ConfigModel)
    params: dict = Field(default_factory=dict)


class Report(BaseModel):
    command: str
    config: ConfigModel
    result: dict
    pass_: bool = Field(alias="pass")

    model_config = {"populate_by_name": True}


def _run(command: str, request: CommandRequest) -> dict:
    cfg = RunConfig(**request.config.model_dump())
    try:
        report, _ = dispatch(command, cfg, dict(request.params))
    except (UsageError, ParseError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except StabilizationError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return report


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/residue", response_model=Report)
def residue(request: CommandRequest):
    return _run("residue", request)


@app.post("/zeta0", response_model=Report)
def zeta0(request: CommandRequest):
    return _run("zeta0", request)


@app.post("/level-traces", response_model=Report)
def level_traces(request: CommandRequest):
    return _run("level-traces", request)


@app.post("/symbol", response_model=Report)
def symbol(request: CommandRequest):
    return _run("symbol", request)


@app.post("/index-pairing", response_model=Report)
def index_pairing(request: CommandRequest):
    return _run("index-pairing", request)


@app.post("/qseries", response_model=Report)
def qseries_endpoint(request: CommandRequest):
    return _run("qseries", request)


@app.post("/check/{name}", response_model=Report)
def check(name: str, request: CommandRequest):
    return _run(f"check:{name}", request)

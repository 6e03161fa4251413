"""FastAPI application exposing sweeps, demo trials and timing tables."""

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from .. import __version__
from .handlers import execute_demo, execute_sweep, execute_timing, sweep_csv_text
from .jobs import JobStore
from .schemas import (
    DemoRequest,
    DemoResponse,
    HealthResponse,
    JobInfo,
    SweepRequest,
    TimingRequest,
    TimingResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="beamtrain service", version=__version__)
    store = JobStore()
    app.state.jobs = store

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/demo", response_model=DemoResponse)
    def demo(req: DemoRequest) -> DemoResponse:
        try:
            return execute_demo(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/timing", response_model=TimingResponse)
    def timing(req: TimingRequest) -> TimingResponse:
        try:
            return execute_timing(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/sweeps", response_model=JobInfo)
    def submit_sweep(req: SweepRequest) -> JobInfo:
        try:
            req.to_config()  # validate before accepting the job
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if req.wait:
            # Synchronous path: run in the request handler and hand the
            # finished job back in one round trip.
            job = store.submit_sync(req)
        else:
            job = store.submit(req)
        return job.info()

    @app.get("/sweeps/{job_id}", response_model=JobInfo)
    def sweep_status(job_id: str) -> JobInfo:
        job = store.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no such job {job_id!r}")
        return job.info()

    @app.get("/sweeps/{job_id}/csv", response_class=PlainTextResponse)
    def sweep_csv(job_id: str) -> str:
        job = store.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no such job {job_id!r}")
        info = job.info()
        if info.state != "done":
            raise HTTPException(status_code=409, detail=f"job is {info.state}, not done")
        assert job.result is not None
        return sweep_csv_text(job.result)

    return app


app = create_app()

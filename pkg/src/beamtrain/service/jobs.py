"""In-memory store for sweep jobs running on background threads."""

import threading
import uuid
from dataclasses import dataclass, field

from ..simulate import SweepResult
from .schemas import JobInfo, SweepRequest, SweepSummary


@dataclass
class Job:
    job_id: str
    request: SweepRequest
    state: str = "queued"
    done_cells: int = 0
    total_cells: int = 0
    summary: SweepSummary | None = None
    result: SweepResult | None = None
    error: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def info(self) -> JobInfo:
        with self.lock:
            return JobInfo(
                job_id=self.job_id,
                state=self.state,
                done_cells=self.done_cells,
                total_cells=self.total_cells,
                error=self.error,
                result=self.summary if self.state == "done" else None,
            )


class JobStore:
    """Thread-backed job registry. Jobs live for the process lifetime."""

    def __init__(self) -> None:
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, req: SweepRequest) -> Job:
        from .handlers import execute_sweep

        job = Job(job_id=uuid.uuid4().hex[:12], request=req)
        job.total_cells = len(req.to_config().cells())
        with self._lock:
            self._jobs[job.job_id] = job

        def runner() -> None:
            def progress(done: int, total: int) -> None:
                with job.lock:
                    job.done_cells = done
                    job.total_cells = total

            with job.lock:
                job.state = "running"
            try:
                result, summary = execute_sweep(req, progress_cb=progress)
            except Exception as exc:
                with job.lock:
                    job.state = "error"
                    job.error = str(exc)
                return
            with job.lock:
                job.result = result
                job.summary = summary
                job.state = "done"

        threading.Thread(target=runner, daemon=True).start()
        return job

    def submit_sync(self, req: SweepRequest) -> Job:
        """Run the sweep on the calling thread and return the finished job."""
        from .handlers import execute_sweep

        job = Job(job_id=uuid.uuid4().hex[:12], request=req, state="running")
        job.total_cells = len(req.to_config().cells())
        with self._lock:
            self._jobs[job.job_id] = job
        try:
            result, summary = execute_sweep(req)
        except Exception as exc:
            with job.lock:
                job.state = "error"
                job.error = str(exc)
            return job
        with job.lock:
            job.result = result
            job.summary = summary
            job.done_cells = job.total_cells
            job.state = "done"
        return job

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

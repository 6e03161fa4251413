"""HTTP service wrapping the simulator: pydantic schemas, job store, FastAPI app."""

from .app import app, create_app

__all__ = ["app", "create_app"]

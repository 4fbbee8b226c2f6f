"""FastAPI service wrapper around the core simulation and analysis package."""

from .app import app, create_app  # noqa: F401

"""HTTP service layer: pydantic schemas, handlers, and the FastAPI app."""

from . import handlers, schemas
from .app import app

__all__ = ["app", "handlers", "schemas"]

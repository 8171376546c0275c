"""HTTP annotation service: project, seed, preview, save, and export endpoints."""

from .app import create_app

__all__ = ["create_app"]

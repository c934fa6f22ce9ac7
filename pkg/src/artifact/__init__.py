"""Exact regular-open algebra, credences and integrators on the real line."""

from .errors import ArtifactError

__version__ = "0.1.0"

__all__ = ["ArtifactError", "__version__"]

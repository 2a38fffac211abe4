"""Exact arithmetic for Z_m Nakajima quiver points and right ideals of the
deformed preprojective crossed product B^tau."""
from .scalars import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]

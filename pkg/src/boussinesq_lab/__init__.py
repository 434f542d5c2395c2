"""Simulation and diagnostics for small-scale growth in 2D Boussinesq flows
and axisymmetric 3D Euler flows with swirl."""

from .config import RunConfig, load_config, parse_config, serialize_config
from .grids import AnnulusGrid, StripGrid, TorusGrid
from .runner import run

__all__ = [
    "AnnulusGrid",
    "RunConfig",
    "StripGrid",
    "TorusGrid",
    "load_config",
    "parse_config",
    "run",
    "serialize_config",
]

"""Convergence domains of multivariate power series and series built from prescribed domains."""

from . import analyze, coeffs, lattice, logconvex, recover, stardom, synthesize
from .lattice import MultiIndex

__all__ = ["MultiIndex", "analyze", "coeffs", "lattice", "logconvex", "recover", "stardom", "synthesize"]
__version__ = "0.1.0"

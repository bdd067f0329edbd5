"""Minimum decycling sets of de Bruijn graphs: construction, enumeration, optimisation."""
from .dbg_core import GraphParams, KmerSet
from .kernels import BACKEND

__all__ = ["GraphParams", "KmerSet", "BACKEND"]
__version__ = "0.1.0"

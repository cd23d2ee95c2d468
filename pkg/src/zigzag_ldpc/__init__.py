"""Expander graph products (zig-zag, replacement and bipartite variants),
Cayley graph constructions, and generalized LDPC codes built on them."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import ZigzagError
from .graph_core import BipartiteRotationGraph, RotationGraph

__all__ = ["BipartiteRotationGraph", "RotationGraph", "ZigzagError", "__version__"]

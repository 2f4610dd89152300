"""Hamiltonian-subset counting, crux computation and the expander/wheel toolkit."""

from .graph import Graph, VertexSet

__version__ = "0.1.0"

__all__ = ["Graph", "VertexSet", "__version__"]

"""Constructive spatial embeddings of complete graphs, with exact invariants.

The package builds explicit planar diagrams for an embedding of the complete
graph on n vertices (n odd) inside the three-sphere, decomposes its cycles,
realizes Dehn-surgery instructions as diagrammatic full twists, and computes
exact knot invariants (Kauffman bracket, Jones, Alexander, Conway) for the
resulting knots and links.
"""

from .errors import (
    ConstructionError,
    DiagramError,
    HKFError,
    MoveError,
    ParseError,
)

__version__ = "0.1.0"

__all__ = [
    "ConstructionError",
    "DiagramError",
    "HKFError",
    "MoveError",
    "ParseError",
    "__version__",
]

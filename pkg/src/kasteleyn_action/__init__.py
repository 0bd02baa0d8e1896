"""Kasteleyn cokernels of Temperley graphs acting on perfect matchings.

Build G+ from an embedded planar graph G, compute its Kasteleyn cokernel and
the Jacobian of G, run the Temperley and Bernardi maps, and check that the
cokernel acts simply transitively on the perfect matchings of G+.
"""

__version__ = "0.1.0"

from .planar import EmbeddedPlanarGraph, load_graph, parse_graph  # noqa: E402

__all__ = ["EmbeddedPlanarGraph", "load_graph", "parse_graph", "__version__"]

"""Numerical geometry of Riemannian almost product manifolds and the P-connection.

Charts are described by expression matrices for g and P; every object is
evaluated at sample points and the identities between them are reported as
normalized residuals.
"""

__version__ = "0.1.0"

from .manifold import ManifoldSpec, load_spec, validate_structure  # noqa: E402

__all__ = ["ManifoldSpec", "__version__", "load_spec", "validate_structure"]

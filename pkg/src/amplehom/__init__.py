"""Homology of ample groupoids and invariants of their topological full groups."""

__version__ = "0.1.0"

from .abelian import (
    FgAbGroup,
    IntMatrix,
    SmithDecomposition,
    cokernel,
    kernel,
    smith_normal_form,
)

__all__ = [
    "FgAbGroup",
    "IntMatrix",
    "SmithDecomposition",
    "cokernel",
    "kernel",
    "smith_normal_form",
    "__version__",
]

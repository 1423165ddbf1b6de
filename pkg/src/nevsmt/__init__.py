"""Certified subgeneral-position algebra and a numerical Nevanlinna calculus.

Exact graded linear algebra over the rationals (Hilbert functions, emptiness
certificates, position checks, hypersurface replacement), Chow and Hilbert
weights, the filtration quotient tables, truncation-level calculators, and a
one-variable numerical value-distribution calculus for entire curves, behind
a scenario-driven command line.
"""

__version__ = "0.1.0"

from nevsmt._kernel import KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND", "__version__"]

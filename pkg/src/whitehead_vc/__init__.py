"""Numerical laboratory for colored Jones polynomials of Whitehead chains.

Modules
-------
specfun    classical and quantum dilogarithms
jones      exact finite sums for the colored Jones polynomials
potential  potential functions, gradients, Hessians, discrete corrections
saddle     Newton solver and parameter continuation for critical points
geometry   shape parameters, gluing equations, Bloch-Wigner volumes
tv         Turaev-Viro invariants from colored Jones sums
cli        command line front end
"""

from ._backend import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]

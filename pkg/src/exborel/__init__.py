"""Exact homological computations for finite-dimensional basic algebras.

Given a quiver with relations and a homological system, this package
computes minimal projective resolutions, the Yoneda algebra with its
transferred A-infinity structure, the associated interlaced weak
ditalgebra, its module category, the right algebra, and verifies the
exact Borel subalgebra properties.  All arithmetic is exact (rationals
or a prime field).
"""

from exborel.linalg import Rationals, PrimeField, Matrix, Subspace

__version__ = "0.1.0"

__all__ = ["Rationals", "PrimeField", "Matrix", "Subspace", "__version__"]

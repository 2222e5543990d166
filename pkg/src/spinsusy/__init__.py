"""Planar spin-s Hamiltonians with hidden o(1,2) symmetry.

Modules: ``spinalg`` (spin matrices, projectors, interaction matrices),
``radial`` (decoupled radial blocks), ``susy`` (superpotentials and ladder
states), ``besselk`` (modified Bessel K), ``oracle`` (finite-difference and
quadrature checks) and ``cli``.
"""
from .halfint import HalfInt

__version__ = "0.1.0"
__all__ = ["HalfInt", "__version__"]

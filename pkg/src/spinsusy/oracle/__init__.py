"""Independent numerical checks: radial finite differences, quadrature and 2D commutators."""
from .fd import (
    DEFAULT_POINTS,
    CoarseGridWarning,
    DiscretizedHamiltonian,
    RadialGrid,
    convergence_order,
    count_below,
    discretize,
    eigenvector,
    lowest_eigenvalues,
    richardson,
)
from .plane import PlaneGrid, PlaneOperators, random_hermitian_field, symmetry_residuals, probe_functions
from .quadrature import norm_squared, normalize

__all__ = [
    "DEFAULT_POINTS",
    "CoarseGridWarning",
    "DiscretizedHamiltonian",
    "RadialGrid",
    "convergence_order",
    "count_below",
    "discretize",
    "eigenvector",
    "lowest_eigenvalues",
    "richardson",
    "PlaneGrid",
    "PlaneOperators",
    "random_hermitian_field",
    "symmetry_residuals",
    "probe_functions",
    "norm_squared",
    "normalize",
]

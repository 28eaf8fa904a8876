"""Index, prime-ideal factorization and discriminant counting for the
simplest quartic fields K_m = Q(t), t^4 - m t^3 - 6 t^2 + m t + 1 = 0."""

from .kernels import BACKEND
from .quartic_field import AlgebraicNumber, FieldParams, build

__all__ = ["AlgebraicNumber", "BACKEND", "FieldParams", "build"]
__version__ = "0.1.0"

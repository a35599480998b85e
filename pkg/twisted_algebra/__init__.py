"""
Twisted group algebras: cocycles, finitely supported elements and the
truncated regular representations.
"""
from .cocycles import Cocycle, unit_phase
from .elements import (
    AlgebraElement, twisted_convolution, involution, trace, fejer_coefficient, fejer_average,
)
from .representations import (
    translation_entries, lambda_matrix, lambda_of, rho_matrix, equivalence_unitary,
)

__all__ = [
    'Cocycle',
    'unit_phase',
    'AlgebraElement',
    'twisted_convolution',
    'involution',
    'trace',
    'fejer_coefficient',
    'fejer_average',
    'translation_entries',
    'lambda_matrix',
    'lambda_of',
    'rho_matrix',
    'equivalence_unitary',
]

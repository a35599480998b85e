"""
Truncated even spectral triples on twisted group algebras.
"""
from .clifford import CliffordPair
from .operators import BlockOperator, NormEstimate, op_norm, op_norm_estimate
from .triple import (
    TruncatedTriple, dirac, spectrum, spectrum_rows, eigenvalue_counting, commutator,
    dn_norm, unitary_dynamics, functional_calculus, function_preset,
)
from .seminorms import (
    SeminormBracket, CosetBlock, CheckReport, generator_norm, seminorm_bracket,
    multiplier_commutator, comparison_norms, connes_commutator_norm, coset_block_seminorm,
    leibniz_check, dynamics_lipschitz_check, symmetric_generator, bracket_sweep,
)

__all__ = [
    'CliffordPair',
    'BlockOperator',
    'NormEstimate',
    'op_norm',
    'op_norm_estimate',
    'TruncatedTriple',
    'dirac',
    'spectrum',
    'spectrum_rows',
    'eigenvalue_counting',
    'commutator',
    'dn_norm',
    'unitary_dynamics',
    'functional_calculus',
    'function_preset',
    'SeminormBracket',
    'CosetBlock',
    'CheckReport',
    'generator_norm',
    'seminorm_bracket',
    'multiplier_commutator',
    'comparison_norms',
    'connes_commutator_norm',
    'coset_block_seminorm',
    'leibniz_check',
    'dynamics_lipschitz_check',
    'symmetric_generator',
    'bracket_sweep',
]

"""Fermionic linear optics: Majorana circuits, FLO fidelity and FLO extent of pure states."""

from .estimators import FloExtent, FloFidelity, MagicOrbitTransformer
from .extent import (Bracket, Certificate, Decomposition, Term, decompose_even4, extent_bracket,
                     extent_bracket_general, product_extent_bounds, witness_even4)
from .fidelity import FidelityConfig, FidelityResult, optimize_fidelity, verify_fidelity_multiplicativity
from .flo import FloCircuit, MajoranaRotation, circuit_from_orthogonal, induced_orthogonal, random_flo_state
from .fock import EVEN, MIXED, ODD, PauliString, PureState, basis_state, majorana_op, random_state
from .magic4 import a8, closed_extent, closed_fidelity, extract_rsa, m_phi, orbit_invariant
from .schmidt import extract_thetas, holder_chain_audit, synthesize_botero

__all__ = [
    "Bracket", "Certificate", "Decomposition", "EVEN", "FidelityConfig", "FidelityResult",
    "FloCircuit", "FloExtent", "FloFidelity", "MIXED", "MagicOrbitTransformer", "MajoranaRotation",
    "ODD", "PauliString", "PureState", "Term", "a8", "basis_state", "circuit_from_orthogonal",
    "closed_extent", "closed_fidelity", "decompose_even4", "extent_bracket",
    "extent_bracket_general", "extract_rsa", "extract_thetas", "holder_chain_audit",
    "induced_orthogonal", "m_phi", "majorana_op", "optimize_fidelity", "orbit_invariant",
    "product_extent_bounds", "random_flo_state", "random_state", "synthesize_botero",
    "verify_fidelity_multiplicativity", "witness_even4",
]
__version__ = "0.1.0"

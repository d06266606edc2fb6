"""Harmonic analysis on the twisted finite upper half-plane GL(2, q) / K.

K is the Coxeter (non-split) torus.  The package computes the decomposition
of Ind_K^G Phi, twisted spherical functions and the support uncertainty
principle for the Hecke algebra L1_Phi(G, K), each checked against a
brute-force oracle.
"""
from .character_table import CharacterTable, IrrepLabel, build_character_table
from .errors import ConfigError, TorusHarmonicsError, ValidationFailed
from .field_tower import CharLabel, ExtElem, FieldCtx, build_field_context
from .gl2_geometry import GL2, gl2

__version__ = "0.1.0"

__all__ = [
    "CharLabel", "CharacterTable", "ConfigError", "ExtElem", "FieldCtx", "GL2",
    "IrrepLabel", "TorusHarmonicsError", "ValidationFailed", "build_character_table",
    "build_field_context", "gl2", "__version__",
]

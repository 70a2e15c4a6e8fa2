"""Finite fields, twisted Reed-Solomon codes and their self-orthogonality."""
from .gf import FieldCtx, FieldElem, FieldError, field_from_order, make_field, subfield_elements
from .poly import ParameterError, Poly, Regime, TwistParams, dual_space_basis, twisted_basis
from .codes import LinearCode, classify, dual, from_generators, is_self_orthogonal, min_distance, schur_square
from .gtrs import EvalConfig, grs_code, gtrs_code, regime, rs_code, t_k_set
from .constructions import (
    SelfOrthWitness,
    WindowError,
    construct_ct4,
    construct_ct5,
    construct_tc1,
    construct_tc2,
    theorem41_check,
)

__version__ = "0.1.0"

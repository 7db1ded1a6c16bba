"""Exact pseudo-Garside engine for the braid group of Z^n."""

from .matrices import (
    ZbraidError,
    NotUnimodularError,
    SingularMatrixError,
    coset_reduce,
    det,
    ext_gcd_bezout,
    format_matrix,
    identity,
    mat_inv,
    mat_mul,
    parse_matrix,
    row_action,
)
from .feasibility import linear_feasible, strict_cone_feasible
from .cones import (
    Cell,
    DegenerateCellError,
    NotLexicographicError,
    PLSet,
    minkowski_sum,
    pl_boolean,
    pl_member,
    plset,
    positivity_set,
    rat_to_int_factor,
    recover_lex_matrix,
)
from .lexgerm import in_M, in_N, is_in_H, lex_sign, precedes, precedes_witness, star
from .lattice import Coset, JoinRecoveryError, bottom, coset, join, leq, meet, top
from .garside import (
    GroupNF,
    MonoidNF,
    ZnGerm,
    group_eq,
    group_inv,
    group_mul,
    group_normal_form,
    greedy_normal_form,
    is_greedy,
    is_minimal,
    monoid_normal_form,
    pair_greedy_step,
    word_product,
)
from .bruhat import BraidGerm, bruhat_join, bruhat_meet, inversion_set, weak_leq

__all__ = [name for name in dir() if not name.startswith("_")]

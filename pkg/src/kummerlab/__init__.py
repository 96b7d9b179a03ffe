"""Exact arithmetic for Kummer towers over rational function fields F_{p^m}(t),
norm equations, first-order definability predicates and factor-tree experiments."""

from .errors import (CannotClassify, ContradictoryConstraints, DegenerateInput, DegenerateRHS,
                     DegenerateRadicand, DivisionByZero, FieldMismatch, KummerLabError,
                     LimitExceeded, MissingRootOfUnity, NoNonresidue, ParseError, PoleAtPlace,
                     PreconditionError)
from .finite_field import FieldSpec, FFElem, is_qth_power_ext, make_field, parse_field_spec
from .poly import Poly, factor_poly, is_irreducible
from .ratfunc import (Constraint, Divisor, Place, RatFunc, divisor_of, is_qth_power_in_K, ord_at,
                      parse_place, parse_ratfunc, residue_at, weak_approx)
from .kummer_tower import (Tower, TowerPlace, classify_place_step, is_qth_power_in_tower,
                           places_above, tower_make, tower_ord)
from .norm_oracle import (NormVerdict, Witness, brute_force_norm_witness, expand_norm_to_system,
                          norm_solvable)
from .definability import (AuxPair, Decision, SIntegers, UniformBounded, ValRing, choose_ab,
                           constants_predicate, multiplicative_R_membership, s_integer_decide,
                           val_ring_predicate)
from .tower_lab import (FactorTree, LevelSpec, QBoundReport, build_inert_tower, factor_tree,
                        path_q_profile, verify_inert_step, verify_total_ramification_step)

__version__ = "0.1.0"

"""Test ideals, F-jumping exponents and b-function roots for polynomials over F_p."""

from .bfunction import BFunctionData, BRoot, b_roots, cross_check, root_digit_table
from .errors import AmbientMismatch, CappedError, IndeterminateError, PolySyntaxError
from .euler import LevelModule, level_module, structure_map_image, survivors_check, truncated_roots
from .frobenius import Caps, PowerTable, bracket_power, d_ideal, frobenius_root
from .padics import (
    BasePExpansion,
    MaximalIdealSpec,
    PAdicNumber,
    conjugates,
    expand_inverse_p,
    in_Zp_local,
    is_strictly_periodic,
    negate_to_padic,
    padic_to_rational,
)
from .polyalg import Ideal, Poly, Ring, ideal_equal, normal_form, parse_poly, poly_pow, reduced_groebner
from .testideal import ChainCache, JumpChain, JumpReport, fpt, jump_chain, jumping_exponents, nu_values

__version__ = "0.1.0"

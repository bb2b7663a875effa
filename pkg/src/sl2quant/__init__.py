"""Exact algebra for polynomial quantizations of sl(2,R) coadjoint orbits.

Submodules:

exactnum    Gaussian rationals and sparse parameter polynomials
poisson     the classical Poisson algebra and orbit rings
enveloping  the quantized algebra in normal form, plus a rewriting reference
repmod      truncated weight modules and the Q(h^2) eigenvalue recursion
quantize    quantization maps, derived constraints and the case analysis
cli         command-line entry point (``sl2quant``)
"""

from .exactnum import GaussRational, ParamPoly, I, solve_linear
from .expr import parse, unparse, ParseError
from .poisson import ClassicalPoly, pbracket, orbit_reduce, verify_identity, graded_split
from .enveloping import NcPoly, H, Ep, Em, ONE, nc_mul, nc_reduce, nc_commutator, nc_sym, eval_in_module
from .repmod import WeightModule, build_module, casimir_value, recursion_suite
from .quantize import (
    QuantMap,
    quantize_expression,
    derive_qh2,
    extend_to_degree2,
    derive_constraints,
    case_analysis,
    triviality_propagation,
    trivial_quantization,
)

__version__ = "0.1.0"

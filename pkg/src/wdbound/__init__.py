"""Exact arithmetic for quotients of Drinfeld modular varieties attached to division algebras over F_q(T)."""

from .admissible import AdmissibleLevel, admissible_density, enumerate_admissible, is_admissible_prime
from .algebra import DivisionAlgebraSpec, TypeData, dbar_spec, validate_algebra, validate_type
from .check import run_check
from .counts import (
    BettiVector,
    ModuliConfig,
    QuadExact,
    asymptotic_h,
    betti_vector,
    component_count,
    dv_bound,
    gl_order,
    limit_ratio,
    pgl_order,
    ratio_exact,
    supersingular_count,
    volume_g1,
    wd_bound,
    wd_limit,
)
from .ff_poly import (
    GF,
    Poly,
    PrimePower,
    brute_force_is_admissible,
    count_monic_irreducibles,
    enumerate_monic_irreducibles,
    field_of,
    format_poly,
    is_irreducible,
    parse_poly,
)
from .report import RunConfig, TableRow, build_convergence_table, optimal_curves_report
from .zeta import (
    Place,
    RationalFunctionQ,
    euler_product_check,
    volume_residue_oracle,
    zeta_division_rational_function,
    zeta_global_neg,
    zeta_local_neg,
    zeta_partial_neg,
)

__version__ = "0.1.0"

"""Eigenvalue measures of group ring matrices on finite quotients.

Regular representations of ``Mat_n(C[G])`` on ``C[G/N]^n`` for free
abelian groups and the discrete Heisenberg group, their eigenvalue
measures, the torus limit in the abelian case and the exact zero-atom
census of ``a - b`` over ``H3(Z/p^m Z)``.
"""

from .abelian import (
    TorusSampler,
    evaluate_at,
    limit_measure,
    spectrum_by_factorization,
    symbolic_char_poly,
    weak_convergence_report,
)
from .config import JobConfig
from .group_ring import (
    GroupRingElement,
    GroupRingMatrix,
    parse_element,
    parse_group,
    parse_matrix,
    star_moment,
    trace_G,
)
from .groups import AbelianGroupSpec, HeisenbergGroup, QuotientSpec, enumerate_quotient
from .heisenberg import power_scalar, structural_zero_count, zero_count_sequence
from .quotient_rep import IrrepSpec, apply_irrep, heisenberg_irrep, irrep_census, regular_rep_matrix
from .spectra import (
    AtomicMeasure,
    brown_measure,
    eigenvalue_measure,
    eigenvalues,
    eigenvalues_deflated,
    fk_determinant,
    luck_product_check,
    zero_atom_numeric,
    zero_atom_rank,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupSpec",
    "AtomicMeasure",
    "GroupRingElement",
    "GroupRingMatrix",
    "HeisenbergGroup",
    "IrrepSpec",
    "JobConfig",
    "QuotientSpec",
    "TorusSampler",
    "apply_irrep",
    "brown_measure",
    "eigenvalue_measure",
    "eigenvalues",
    "eigenvalues_deflated",
    "enumerate_quotient",
    "evaluate_at",
    "fk_determinant",
    "heisenberg_irrep",
    "irrep_census",
    "limit_measure",
    "luck_product_check",
    "parse_element",
    "parse_group",
    "parse_matrix",
    "power_scalar",
    "regular_rep_matrix",
    "spectrum_by_factorization",
    "star_moment",
    "structural_zero_count",
    "symbolic_char_poly",
    "trace_G",
    "weak_convergence_report",
    "zero_atom_numeric",
    "zero_atom_rank",
    "zero_count_sequence",
]

"""Exact computer algebra for EC-polynomials, symmetric-function
expansions, and rank-2 cluster variables / quiver-Grassmannian Euler
characteristics, with every quantity computed by independent routes that
must agree exactly."""

__version__ = "0.1.0"

from .combinatorics import (  # noqa: F401
    ASequence,
    IntPartition,
    SetPartition,
    a_seq,
    binom,
    enumerate_bounded_compositions,
    enumerate_int_partitions,
    enumerate_permutations,
    enumerate_set_partitions,
    gbinom,
    mod_binom,
)
from .ecpoly import (  # noqa: F401
    ECPolynomial,
    check_symmetry,
    d_form,
    e_of_block,
    e_of_partition,
    ec_eval_bridge_point,
    ec_poly,
)
from .ring import BigRat, LaurentPoly2, ParamPoly, ZPoly  # noqa: F401
from .symfunc import (  # noqa: F401
    SymExpansion,
    expand,
    expand_elementary,
    expand_homogeneous,
    expand_monomial,
    expand_powersum,
    expand_schur,
    kostka,
    reconstruct,
    sign_coherency,
)
from .cluster import (  # noqa: F401
    ChiTable,
    ClusterParams,
    binomial_identity_check,
    chi_closed_form,
    chi_expanded,
    chi_from_recurrence,
    chi_nonnegativity_report,
    chi_small_e1,
    chi_table_closed_form,
    cross_check,
    ec_bridge,
    stfact_check,
    xvar_closed_form,
    xvar_recurrence,
)

"""opident: exact classification of linear-operator identities.

Enumerates operator monomials, forms the consequence matrix of a candidate
operator identity over a polynomial coefficient ring, reduces it by exact
unimodular operations (partial Smith form), and certifies where the rank
stratifies via determinantal ideals and Groebner bases.
"""

from ._kernel import BACKEND as kernel_backend
from .rings import MonomialOrder, PolyRing, Polynomial
from .monomials import OperatorMonomial, enumerate_monomials, narayana
from .compose import (
    OperatorPolynomial,
    comp_B_m,
    comp_L_m,
    comp_m_B,
    comp_m_L,
    consequences,
    distinct_consequences,
)
from .matrices import (
    MinorCensus,
    PartialSmithForm,
    PolyMatrix,
    RankResult,
    minor_census,
    partial_smith_form,
    rank_at,
    univariate_smith,
)
from .conmatrix import ConsequenceMatrix, build_consequence_matrix, generic_operator
from .ideals import GroebnerBasis, Ideal, buchberger, radical_membership, reduce_poly
from .classify import ClassificationReport, classify, genericity_scan, identity_text

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "MonomialOrder",
    "PolyRing",
    "Polynomial",
    "OperatorMonomial",
    "enumerate_monomials",
    "narayana",
    "OperatorPolynomial",
    "comp_m_B",
    "comp_B_m",
    "comp_m_L",
    "comp_L_m",
    "consequences",
    "distinct_consequences",
    "PolyMatrix",
    "PartialSmithForm",
    "MinorCensus",
    "RankResult",
    "partial_smith_form",
    "minor_census",
    "rank_at",
    "univariate_smith",
    "ConsequenceMatrix",
    "build_consequence_matrix",
    "generic_operator",
    "Ideal",
    "GroebnerBasis",
    "buchberger",
    "radical_membership",
    "reduce_poly",
    "ClassificationReport",
    "classify",
    "genericity_scan",
    "identity_text",
]

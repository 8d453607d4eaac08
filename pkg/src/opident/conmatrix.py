"""The matrix of consequences of a generic operator identity.

For a generic R = a*m1 + b*m2 + ... over the basis of monomials of degree p
and multiplicity q, the consequences of R = 0 in degree p+1, multiplicity
q+1 assemble into a matrix: one row per distinct consequence (frozen listing
order, duplicates dropped keeping the first occurrence), one column per
basis monomial of the larger space in dictionary order, entries in the
coefficient ring Q[a, b, ...].  An identity with numeric coefficients is a
specialization of the columns' worth of variables, and the rank of the
specialized matrix is what the classification stratifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .compose import OperatorPolynomial, consequences, distinct_consequences
from .matrices import PolyMatrix
from .monomials import enumerate_monomials
from .rings import PolyRing

_COEFF_NAMES = "abcdefghijklmnopqrstuvwxyz"


def coefficient_ring(p, q):
    """Q[a, b, ...] with one variable per basis monomial of (p, q)."""
    n = len(enumerate_monomials(p, q))
    if n > len(_COEFF_NAMES):
        raise ValueError(
            f"basis of ({p},{q}) needs {n} coefficient names; only single letters are supported"
        )
    return PolyRing(tuple(_COEFF_NAMES[:n]))


def generic_operator(p, q, ring=None):
    """The generic element of the (p, q) monomial space."""
    basis = enumerate_monomials(p, q)
    ring = ring or coefficient_ring(p, q)
    coeffs = {m: ring.var(_COEFF_NAMES[i]) for i, m in enumerate(basis)}
    return OperatorPolynomial(ring, coeffs)


@dataclass
class ConsequenceMatrix:
    """Rows: distinct consequences; columns: the (p+1, q+1) basis."""

    degree: int
    multiplicity: int
    ring: PolyRing
    row_specs: list
    all_consequences: list
    columns: list
    matrix: PolyMatrix

    @property
    def nrows(self):
        return self.matrix.nrows

    @property
    def ncols(self):
        return self.matrix.ncols

    def specialize(self, assignment):
        """Substitute coefficient values; returns a plain PolyMatrix."""
        return self.matrix.substitute(assignment)

    def text(self):
        return self.matrix.text()


def _build(p, q):
    ring = coefficient_ring(p, q)
    R = generic_operator(p, q, ring)
    entries = consequences(R)
    rows = distinct_consequences(entries)
    cols = enumerate_monomials(p + 1, q + 1)
    zero = ring.zero()
    mat = []
    for e in rows:
        lookup = e.opoly.coeffs
        mat.append([lookup.get(m, zero) for m in cols])
    return ConsequenceMatrix(p, q, ring, rows, entries, cols, PolyMatrix(ring, mat, len(cols)))


@lru_cache(maxsize=32)
def _build_cached(p, q):
    return _build(p, q)


def build_consequence_matrix(p, q):
    """Memoized; treat the result as read-only."""
    if p < 1 or q < 0:
        raise ValueError("degree must be >= 1 and multiplicity >= 0")
    return _build_cached(p, q)

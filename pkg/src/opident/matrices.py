"""Exact linear algebra over polynomial rings.

Everything here is fraction-free or rational-exact; no floating point.  The
partial Smith form peels off an identity block using only unimodular row and
column operations (swaps, scaling by nonzero rationals, adding polynomial
multiples), so the rank of any specialization is identity_size plus the rank
of the specialized residual block, and the determinantal ideals of the
residual agree with those of the input shifted by identity_size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ._kernel import impl as _k
from .rings import Polynomial, PolyRing


class PolyMatrix:
    """Dense matrix of Polynomials over one ring."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows, ncols=None):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            self.ncols = widths.pop()
        else:
            self.ncols = ncols or 0
        for r in self.rows:
            for e in r:
                if not isinstance(e, Polynomial) or e.ring != ring:
                    raise ValueError("entry from a different ring")

    @classmethod
    def from_texts(cls, ring, rows, loose=False):
        return cls(ring, [[ring.parse(t, loose) if t != "." else ring.zero() for t in r] for r in rows])

    def entry(self, i, j):
        return self.rows[i][j]

    def copy(self):
        return PolyMatrix(self.ring, [list(r) for r in self.rows], self.ncols)

    def transpose(self):
        return PolyMatrix(self.ring, [list(col) for col in zip(*self.rows)] if self.rows else [], self.nrows)

    def map_entries(self, fn):
        return PolyMatrix(self.ring, [[fn(e) for e in r] for r in self.rows], self.ncols)

    def substitute(self, assignment):
        return self.map_entries(lambda e: e.substitute(assignment))

    def submatrix(self, row_idx, col_idx):
        return PolyMatrix(self.ring, [[self.rows[i][j] for j in col_idx] for i in row_idx], len(col_idx))

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def text(self, zero_dot=True, sep="  "):
        cells = [[("." if (zero_dot and e.is_zero()) else e.text()) for e in r] for r in self.rows]
        if not cells:
            return ""
        widths = [max(len(cells[i][j]) for i in range(self.nrows)) for j in range(self.ncols)]
        return "\n".join(sep.join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)

    def to_obj(self):
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "vars": list(self.ring.variables),
            "entries": [[e.text() for e in r] for r in self.rows],
        }

    def to_json(self):
        return json.dumps(self.to_obj())

    @classmethod
    def from_obj(cls, obj, ring=None):
        ring = ring or PolyRing(tuple(obj["vars"]))
        m = cls.from_texts(ring, obj["entries"])
        if m.nrows != obj["rows"] or m.ncols != obj["cols"]:
            raise ValueError("matrix shape disagrees with header")
        return m


# -- partial Smith form ----------------------------------------------------


@dataclass
class PartialSmithForm:
    """Outcome of constant-pivot elimination: P * M * Q = [[I, 0], [0, block]]
    with P, Q products of the logged unimodular operations."""

    identity_size: int
    block: PolyMatrix
    row_ops: list = field(default_factory=list)
    col_ops: list = field(default_factory=list)

    def replay(self, matrix):
        """Apply the logged operations to a fresh copy of `matrix`."""
        work = [list(r) for r in matrix.rows]
        for op in self.row_ops:
            _apply_row_op(work, op)
        for op in self.col_ops:
            _apply_col_op(work, op)
        return PolyMatrix(matrix.ring, work, matrix.ncols)

    def verify(self, matrix):
        """Replay ops on `matrix` and check the [[I,0],[0,block]] shape."""
        out = self.replay(matrix)
        t = self.identity_size
        one = matrix.ring.one()
        zero = matrix.ring.zero()
        for i in range(out.nrows):
            for j in range(out.ncols):
                want = None
                if i < t or j < t:
                    want = one if i == j else zero
                if want is not None and out.rows[i][j] != want:
                    return False
                if i >= t and j >= t and out.rows[i][j] != self.block.rows[i - t][j - t]:
                    return False
        return True


def _apply_row_op(rows, op):
    kind = op[0]
    if kind == "swap":
        _, i, j = op
        rows[i], rows[j] = rows[j], rows[i]
    elif kind == "scale":
        _, i, c = op
        rows[i] = [e * c for e in rows[i]]
    elif kind == "addmul":
        _, dst, src, f = op
        rows[dst] = [a + f * b for a, b in zip(rows[dst], rows[src])]
    else:
        raise ValueError(f"unknown row op {kind!r}")


def _apply_col_op(rows, op):
    kind = op[0]
    if kind == "swap":
        _, i, j = op
        for r in rows:
            r[i], r[j] = r[j], r[i]
    elif kind == "scale":
        _, i, c = op
        for r in rows:
            r[i] = r[i] * c
    elif kind == "addmul":
        _, dst, src, f = op
        for r in rows:
            r[dst] = r[dst] + f * r[src]
    else:
        raise ValueError(f"unknown col op {kind!r}")


def partial_smith_form(matrix):
    """Eliminate nonzero rational-constant pivots as far as possible.

    Scans the remaining block row-major, preferring pivots equal to +-1 and
    falling back to any nonzero constant, swaps the pivot to the diagonal,
    scales it to 1, and clears its row and column with polynomial-multiple
    operations (all unimodular over the ring).  Stops when the remaining
    block has no nonzero constant entry.
    """
    ring = matrix.ring
    work = [list(r) for r in matrix.rows]
    m, n = matrix.nrows, matrix.ncols
    row_ops = []
    col_ops = []

    def rowop(op):
        row_ops.append(op)
        _apply_row_op(work, op)

    def colop(op):
        col_ops.append(op)
        _apply_col_op(work, op)

    t = 0
    while t < m and t < n:
        pivot = None
        fallback = None
        for i in range(t, m):
            for j in range(t, n):
                e = work[i][j]
                if e.is_constant() and e.terms:
                    v = e.constant_value()
                    if abs(v) == 1:
                        pivot = (i, j)
                        break
                    if fallback is None:
                        fallback = (i, j)
            if pivot:
                break
        pivot = pivot or fallback
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            rowop(("swap", i, t))
        if j != t:
            colop(("swap", j, t))
        v = work[t][t].constant_value()
        if v != 1:
            rowop(("scale", t, Fraction(1) / v))
        for r in range(t + 1, m):
            e = work[r][t]
            if not e.is_zero():
                rowop(("addmul", r, t, -e))
        for c in range(t + 1, n):
            e = work[t][c]
            if not e.is_zero():
                colop(("addmul", c, t, -e))
        t += 1

    block = PolyMatrix(ring, [row[t:] for row in work[t:]], n - t)
    return PartialSmithForm(t, block, row_ops, col_ops)


# -- determinants and minors -------------------------------------------------


def determinant(matrix):
    """Fraction-free (Bareiss) determinant of a square PolyMatrix."""
    if matrix.nrows != matrix.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = matrix.nrows
    if n == 0:
        return matrix.ring.one()
    a = [list(r) for r in matrix.rows]
    ring = matrix.ring
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                q = num.exact_div(prev)
                if q is None:
                    raise ArithmeticError("inexact division in Bareiss elimination")
                a[i][j] = q
            a[i][k] = ring.zero()
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def determinant_cofactor(matrix):
    """Cofactor-expansion determinant; independent check for small sizes."""
    n = matrix.nrows
    if n != matrix.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return matrix.ring.one()
    if n == 1:
        return matrix.rows[0][0]
    total = matrix.ring.zero()
    cols = list(range(1, n))
    for i in range(n):
        e = matrix.rows[i][0]
        if e.is_zero():
            continue
        sub = matrix.submatrix([r for r in range(n) if r != i], cols)
        term = e * determinant_cofactor(sub)
        total = total + term if i % 2 == 0 else total - term
    return total


def minor(matrix, rows, cols):
    return determinant(matrix.submatrix(list(rows), list(cols)))


def minors(matrix, size):
    """All size x size minors as ((rows, cols), Polynomial), selection order
    lexicographic in (rows, cols)."""
    if size < 1:
        raise ValueError("minor size must be positive")
    out = []
    for rows in combinations(range(matrix.nrows), size):
        for cols in combinations(range(matrix.ncols), size):
            out.append(((rows, cols), minor(matrix, rows, cols)))
    return out


@dataclass
class MinorCensus:
    size: int
    raw_count: int
    distinct: list
    degree_min: int
    degree_max: int

    @property
    def distinct_count(self):
        return len(self.distinct)


def _normalized_key(poly):
    _, part = poly.primitive()
    return part.key()


def minor_census(matrix, size):
    """Count and collect the distinct nonzero size-minors.

    Distinctness is exact: two minors count once only when they are equal
    as polynomials, sign and rational content included.  (This is the
    convention the reference entry counts corroborate — e.g. a vector
    listing both fe and -fe counts them separately; dedup of unexpanded
    expression forms is deliberately not modeled.)  Sizes up to 4 run on
    cached 2x2 subdeterminants (Laplace expansion); larger sizes fall back
    to per-minor elimination.
    """
    ring = matrix.ring
    zero = ring.zero()
    ent = matrix.rows
    raw = 0
    seen = {}

    def record(det):
        nonlocal raw
        raw += 1
        if det.is_zero():
            return
        k = det.key()
        if k not in seen:
            seen[k] = det

    if size <= 4:
        kt = _k.pmul  # term-dict product
        # cache of 2x2 subdeterminants keyed by (r1, r2, c1, c2)
        two = {}

        def det2(r1, r2, c1, c2):
            key = (r1, r2, c1, c2)
            d = two.get(key)
            if d is None:
                d = _k.psub(kt(ent[r1][c1].terms, ent[r2][c2].terms), kt(ent[r1][c2].terms, ent[r2][c1].terms))
                two[key] = d
            return d

        if size == 1:
            for r in ent:
                for e in r:
                    record(e)
        elif size == 2:
            for r1, r2 in combinations(range(matrix.nrows), 2):
                for c1, c2 in combinations(range(matrix.ncols), 2):
                    record(Polynomial(ring, det2(r1, r2, c1, c2), _normalize=False))
        elif size == 3:
            for rows in combinations(range(matrix.nrows), 3):
                r1, r2, r3 = rows
                for cols in combinations(range(matrix.ncols), 3):
                    acc = {}
                    for idx in range(3):
                        e = ent[r1][cols[idx]].terms
                        if not e:
                            continue
                        rest = cols[:idx] + cols[idx + 1 :]
                        sub = det2(r2, r3, rest[0], rest[1])
                        prod = kt(e, sub)
                        acc = _k.padd(acc, prod) if idx % 2 == 0 else _k.psub(acc, prod)
                    record(Polynomial(ring, acc, _normalize=False))
        else:
            # Laplace along the first two rows: pair column split signs
            splits = []
            for pair in combinations(range(4), 2):
                rest = tuple(k for k in range(4) if k not in pair)
                sign = 1 if (pair[0] + pair[1]) % 2 == 1 else -1
                splits.append((pair, rest, sign))
            for rows in combinations(range(matrix.nrows), 4):
                r1, r2, r3, r4 = rows
                for cols in combinations(range(matrix.ncols), 4):
                    acc = {}
                    for pair, rest, sign in splits:
                        top = det2(r1, r2, cols[pair[0]], cols[pair[1]])
                        if not top:
                            continue
                        bot = det2(r3, r4, cols[rest[0]], cols[rest[1]])
                        if not bot:
                            continue
                        prod = kt(top, bot)
                        acc = _k.padd(acc, prod) if sign > 0 else _k.psub(acc, prod)
                    record(Polynomial(ring, acc, _normalize=False))
    else:
        for rows in combinations(range(matrix.nrows), size):
            for cols in combinations(range(matrix.ncols), size):
                record(minor(matrix, rows, cols))

    distinct = sorted(seen.values(), key=lambda p: p.key())
    degs = [p.total_degree() for p in distinct]
    return MinorCensus(size, raw, distinct, min(degs, default=0), max(degs, default=0))


# -- rank ---------------------------------------------------------------------


@dataclass
class RankResult:
    """Generic rank over the rational functions in the free variable, plus
    the pivot polynomials whose roots are the only places rank can drop."""

    generic_rank: int
    exceptional: list


def rank_at(matrix, assignment, free=None):
    """Exact rank after substituting `assignment`.

    With free=None every variable that occurs must be assigned a rational,
    and the integer rank is returned.  With free=<name> the assigned values
    may also be polynomials in the free variable; the matrix is then
    eliminated over Q(<name>) and a RankResult is returned whose exceptional
    list (content-free, sign-normalized, deduplicated pivot polynomials)
    confines the specializations where the rank could be lower.
    """
    sub = matrix.substitute(assignment) if assignment else matrix
    if free is None:
        rows = []
        for r in sub.rows:
            row = []
            den = 1
            for e in r:
                if not e.is_constant():
                    missing = sorted(e.variables_present())
                    raise ValueError(f"unassigned variables {missing} in rank computation")
                v = e.constant_value()
                row.append(v)
                den = den * v.denominator // _gcd(den, v.denominator)
            rows.append([int(v * den) for v in row])
        # a modular full-rank witness is already exact (rank mod p never
        # exceeds the rational rank); otherwise eliminate fraction-free
        bound = min(len(rows), sub.ncols)
        if bound and _k.rank_mod(rows, sub.ncols) == bound:
            return bound
        return _k.rank_int(rows, sub.ncols)
    if free not in matrix.ring._index:
        raise KeyError(f"{free} is not a variable")
    for r in sub.rows:
        for e in r:
            extra = e.variables_present() - {free}
            if extra:
                raise ValueError(f"unassigned variables {sorted(extra)} besides free {free}")
    return _rank_univariate(sub, free)


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


def _rank_univariate(matrix, free):
    ring = matrix.ring
    a = [list(r) for r in matrix.rows]
    m, n = matrix.nrows, matrix.ncols
    prev = ring.one()
    pivots = []
    r = 0
    for c in range(n):
        best = None
        for i in range(r, m):
            e = a[i][c]
            if not e.is_zero():
                d = e.total_degree()
                if best is None or d < best[0]:
                    best = (d, i)
        if best is None:
            continue
        i = best[1]
        if i != r:
            a[i], a[r] = a[r], a[i]
        piv = a[r][c]
        for i in range(r + 1, m):
            v = a[i][c]
            for j in range(c + 1, n):
                num = piv * a[i][j] - v * a[r][j]
                q = num.exact_div(prev)
                if q is None:
                    raise ArithmeticError("inexact division in Bareiss elimination")
                a[i][j] = q
            a[i][c] = ring.zero()
        prev = piv
        pivots.append(piv)
        r += 1
        if r == m:
            break
    exceptional = []
    seen = set()
    for p in pivots:
        if p.total_degree() < 1:
            continue
        _, part = p.primitive()
        k = part.key()
        if k not in seen:
            seen.add(k)
            exceptional.append(part)
    return RankResult(r, exceptional)


def rank_rational(rows, ncols):
    """Rank of a matrix given as lists of Fractions/ints."""
    work = []
    for r in rows:
        den = 1
        fr = [Fraction(v) for v in r]
        for v in fr:
            den = den * v.denominator // _gcd(den, v.denominator)
        work.append([int(v * den) for v in fr])
    return _k.rank_int(work, ncols)


# -- univariate Smith form ---------------------------------------------------


def _udegree(p, vi):
    d = -1
    for key in p.terms:
        e = (key >> (8 * vi)) & 0xFF
        if e > d:
            d = e
    return d


def _udivmod(f, g, var):
    """Division with remainder in Q[var]; f, g univariate in var."""
    ring = f.ring
    vi = ring._index[var]
    t = ring.var(var)
    dg = _udegree(g, vi)
    lcg = g.coefficient(tuple(dg if i == vi else 0 for i in range(ring.nvars)))
    q = ring.zero()
    r = f
    while not r.is_zero():
        dr = _udegree(r, vi)
        if dr < dg:
            break
        lcr = r.coefficient(tuple(dr if i == vi else 0 for i in range(ring.nvars)))
        term = ring.const(lcr / lcg) * t ** (dr - dg)
        q = q + term
        r = r - term * g
    return q, r


def univariate_smith(matrix, var):
    """Smith normal form diagonal over Q[var] for a univariate matrix.

    Returns the list of nonzero diagonal invariant factors, monic, each
    dividing the next.  Entries must involve no variable besides `var`.
    """
    ring = matrix.ring
    vi = ring._index[var]
    for r in matrix.rows:
        for e in r:
            if e.variables_present() - {var}:
                raise ValueError("matrix is not univariate")
    a = [list(r) for r in matrix.rows]
    m, n = matrix.nrows, matrix.ncols
    diag = []
    t = 0
    while t < m and t < n:
        # smallest-degree nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if not a[i][j].is_zero():
                    d = _udegree(a[i][j], vi)
                    if best is None or d < best[0]:
                        best = (d, i, j)
        if best is None:
            break
        _, bi, bj = best
        a[t], a[bi] = a[bi], a[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if not a[i][t].is_zero():
                    q, r = _udivmod(a[i][t], a[t][t], var)
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if not r.is_zero():
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            # clear row t
            for j in range(t + 1, n):
                if not a[t][j].is_zero():
                    q, r = _udivmod(a[t][j], a[t][t], var)
                    for row in a:
                        row[j] = row[j] - q * row[t]
                    if not r.is_zero():
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if not dirty and all(a[i][t].is_zero() for i in range(t + 1, m)) and all(
                a[t][j].is_zero() for j in range(t + 1, n)
            ):
                break
        # divisibility chain: pivot must divide every remaining entry
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if not a[i][j].is_zero():
                    _, r = _udivmod(a[i][j], a[t][t], var)
                    if not r.is_zero():
                        offender = i
                        break
            if offender is not None:
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            continue
        diag.append(a[t][t].monic())
        t += 1
    return diag

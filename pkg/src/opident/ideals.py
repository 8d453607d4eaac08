"""Ideals over the rationals: reduction, Buchberger, membership, zero sets.

The engine works fraction-free: generators are cleared of denominators,
stripped of integer content, sign-normalized (positive leading coefficient)
and deduplicated, which is also the convention behind the "distinct
polynomials" counts this package reproduces.  S-polynomials are reduced by
pseudo-reduction (scaling by positive integers only), so coefficients stay
integral; the basis is made monic only for presentation.  Pair selection is
the normal strategy (smallest lcm in the monomial order), with the coprime
and chain criteria pruning useless pairs; the final basis is fully
inter-reduced, hence canonical for the ring's order.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heappop, heappush
from itertools import combinations
from math import gcd

from ._kernel import impl as _k
from .rings import Polynomial, PolyRing

_FIELD_BITS = 8


# -- rational division with certificate --------------------------------------


def reduce_poly(f, basis, with_certificate=False):
    """Multivariate division of f by an ordered list of polynomials.

    Returns the remainder r; with_certificate=True returns (r, quotients)
    with f == sum(q*g) + r exactly and no term of r divisible by any
    leading term of the basis.  Rational arithmetic throughout.
    """
    ring = f.ring
    guard = ring.guard
    blm = []
    for g in basis:
        if g.ring != ring:
            raise ValueError("basis element from a different ring")
        if g.is_zero():
            raise ValueError("zero polynomial in reduction basis")
        blm.append(max(g.terms))
    rem = {}
    work = dict(f.terms)
    quot = [dict() for _ in basis]
    while work:
        m = max(work)
        c = work.pop(m)
        hit = -1
        for i, lm in enumerate(blm):
            d = m - lm
            if d >= 0 and not (d & guard):
                hit = i
                break
        if hit < 0:
            rem[m] = c
            continue
        g = basis[hit]
        q = Fraction(c) / Fraction(g.terms[blm[hit]])
        d = m - blm[hit]
        qd = quot[hit]
        qd[d] = qd.get(d, 0) + q
        # work -= q * X^d * (g minus its leading term)
        for m2, c2 in g.terms.items():
            if m2 == blm[hit]:
                continue
            k = m2 + d
            prev = work.get(k, 0)
            now = prev - q * c2
            if now:
                work[k] = now
            else:
                work.pop(k, None)
    r = Polynomial(ring, rem)
    if not with_certificate:
        return r
    return r, [Polynomial(ring, q) for q in quot]


def s_polynomial(f, g):
    """S-polynomial over Q, monic-free normalization left to the caller."""
    if f.ring != g.ring:
        raise ValueError("mixed rings")
    lf, lg = max(f.terms), max(g.terms)
    lcm = _lcm_key(f.ring, lf, lg)
    cf = Fraction(f.terms[lf])
    cg = Fraction(g.terms[lg])
    a = Polynomial(f.ring, _k.pmul_term(f.terms, _coeff_div(1, cf), lcm - lf), _normalize=False)
    b = Polynomial(g.ring, _k.pmul_term(g.terms, _coeff_div(1, cg), lcm - lg), _normalize=False)
    return a - b


def _coeff_div(a, b):
    q = Fraction(a) / Fraction(b)
    return int(q) if q.denominator == 1 else q


def _lcm_key(ring, m1, m2):
    out = 0
    total = 0
    for i in range(ring.nvars):
        sh = _FIELD_BITS * i
        e = max((m1 >> sh) & 0xFF, (m2 >> sh) & 0xFF)
        out |= e << sh
        total += e
    return out | (total << ring._deg_shift)


# -- fraction-free engine -----------------------------------------------------


def _prep(gens):
    """Polynomials -> deduplicated normalized integer dicts, ascending."""
    seen = set()
    out = []
    for g in gens:
        if g.is_zero():
            continue
        _, part = g.primitive()
        key = tuple(sorted(part.terms.items(), reverse=True))
        if key in seen:
            continue
        seen.add(key)
        out.append(dict(part.terms))
    out.sort(key=lambda d: (max(d), len(d), sorted(d.items(), reverse=True)))
    return out


def _insertion_reduce(polys, guard):
    """One pass: reduce each input against the already-accepted set."""
    acc = []
    lms = []
    for p in polys:
        r = _k.pseudo_reduce(p, lms, acc, guard) if acc else p
        if r:
            acc.append(r)
            lms.append(max(r))
    return acc


def _interreduce(polys, guard):
    """Full mutual reduction; canonical reduced set of integer dicts."""
    work = [dict(p) for p in polys if p]
    changed = True
    while changed:
        changed = False
        work.sort(key=max)
        out = []
        for p in work:
            # reduce p against everything else currently in work
            base = [q for q in work if q is not p]
            blms = [max(q) for q in base]
            r = _k.pseudo_reduce(p, blms, base, guard)
            if r != p:
                changed = True
            if r:
                out.append(r)
        work = out
    return sorted(work, key=max)


@dataclass
class GBStats:
    generators: int = 0
    after_preprocess: int = 0
    pairs_considered: int = 0
    pairs_pruned_coprime: int = 0
    pairs_pruned_chain: int = 0
    reductions_to_zero: int = 0
    basis_growth: int = 0
    elapsed: float = 0.0


def _buchberger_core(polys, ring, tie_break="index", stats=None):
    guard = ring.guard
    G = [dict(p) for p in polys]
    lms = [max(g) for g in G]
    pending = set()
    heap = []

    def push(i, j):
        if i > j:
            i, j = j, i
        lcm = _lcm_key(ring, lms[i], lms[j])
        pending.add((i, j))
        tie = (i, j) if tie_break == "index" else (-i, -j)
        heappush(heap, (lcm, tie, i, j))

    n = len(G)
    for i, j in combinations(range(n), 2):
        push(i, j)

    while heap:
        lcm, _, i, j = heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        if stats:
            stats.pairs_considered += 1
        # coprime leading monomials: S-poly reduces to zero
        if lcm == lms[i] + lms[j]:
            if stats:
                stats.pairs_pruned_coprime += 1
            continue
        # chain criterion: some k divides the lcm and both other pairs done
        pruned = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            d = lcm - lms[k]
            if d >= 0 and not (d & guard):
                pi = (i, k) if i < k else (k, i)
                pj = (j, k) if j < k else (k, j)
                if pi not in pending and pj not in pending:
                    pruned = True
                    break
        if pruned:
            if stats:
                stats.pairs_pruned_chain += 1
            continue
        # S-polynomial, fraction-free
        gi, gj = G[i], G[j]
        ci = gi[lms[i]]
        cj = gj[lms[j]]
        u = gcd(ci, cj)
        s = _k.pmul_term(gi, cj // u, lcm - lms[i])
        _k.paddmul(s, -(ci // u), lcm - lms[j], gj)
        r = _k.pseudo_reduce(s, lms, G, guard)
        if not r:
            if stats:
                stats.reductions_to_zero += 1
            continue
        G.append(r)
        lms.append(max(r))
        if stats:
            stats.basis_growth += 1
        new = len(G) - 1
        for k in range(new):
            push(k, new)
    return _interreduce(G, guard)


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis: monic, mutually reduced, sorted ascending."""

    ring: PolyRing
    basis: list
    stats: GBStats | None = None

    def __post_init__(self):
        self.basis = sorted(self.basis, key=lambda p: max(p.terms))

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.ring == other.ring and {p.key() for p in self.basis} == {
            p.key() for p in other.basis
        }

    def contains(self, f):
        """Ideal membership by reduction to zero."""
        if f.is_zero():
            return True
        _, part = f.primitive()
        lms = [max(g.terms) for g in self.basis]
        ints = [_int_dict(g) for g in self.basis]
        r = _k.pseudo_reduce(dict(part.terms), lms, ints, self.ring.guard)
        return not r

    def reduce(self, f):
        return reduce_poly(f, self.basis)

    def is_unit_ideal(self):
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def leading_monomials(self):
        return [g.leading_monomial() for g in self.basis]

    def to_obj(self):
        meta = {
            "order": self.ring.order.kind,
            "vars": list(self.ring.variables),
            "generators": self.stats.generators if self.stats else None,
            "elapsed": round(self.stats.elapsed, 3) if self.stats else None,
        }
        return {"meta": meta, "basis": [p.text() for p in self.basis]}

    def to_json(self):
        return json.dumps(self.to_obj(), indent=1)

    @classmethod
    def from_obj(cls, obj, ring=None):
        ring = ring or PolyRing(tuple(obj["meta"]["vars"]))
        if obj["meta"]["order"] != ring.order.kind:
            raise ValueError("order mismatch")
        return cls(ring, [ring.parse(t) for t in obj["basis"]])


def _int_dict(poly):
    _, part = poly.primitive()
    return dict(part.terms)


def buchberger(gens, ring=None, pre_interreduce=None, tie_break="index", collect_stats=False):
    """Reduced Groebner basis of the ideal generated by `gens`.

    pre_interreduce defaults to on for more than 24 generators: inputs are
    sorted ascending and insertion-reduced before pairing, which collapses
    the bulk of a large minor census before the quadratic pair phase.
    """
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("empty generating set needs an explicit ring")
        ring = gens[0].ring
    t0 = time.monotonic()
    stats = GBStats(generators=len(gens)) if collect_stats else None
    polys = _prep(gens)
    if pre_interreduce is None:
        pre_interreduce = len(polys) > 24
    if pre_interreduce and polys:
        polys = _insertion_reduce(polys, ring.guard)
        polys = _interreduce(polys, ring.guard)
    if stats:
        stats.after_preprocess = len(polys)
    if not polys:
        gb = GroebnerBasis(ring, [], stats)
        if stats:
            stats.elapsed = time.monotonic() - t0
        return gb
    reduced = _buchberger_core(polys, ring, tie_break, stats)
    basis = [Polynomial(ring, d).monic() for d in reduced]
    if stats:
        stats.elapsed = time.monotonic() - t0
    return GroebnerBasis(ring, basis, stats)


def confluence_audit(gb):
    """Reduce every S-polynomial of the basis; True when all vanish."""
    basis = gb.basis
    lms = [max(g.terms) for g in basis]
    ints = [_int_dict(g) for g in basis]
    guard = gb.ring.guard
    for i, j in combinations(range(len(basis)), 2):
        lcm = _lcm_key(gb.ring, lms[i], lms[j])
        gi, gj = ints[i], ints[j]
        ci, cj = gi[lms[i]], gj[lms[j]]
        u = gcd(ci, cj)
        s = _k.pmul_term(gi, cj // u, lcm - lms[i])
        _k.paddmul(s, -(ci // u), lcm - lms[j], gj)
        if _k.pseudo_reduce(s, lms, ints, guard):
            return False
    return True


@dataclass
class Ideal:
    """Finitely generated ideal; the Groebner basis is computed on demand."""

    ring: PolyRing
    gens: list
    _gb: GroebnerBasis | None = field(default=None, repr=False)

    @classmethod
    def of(cls, gens, ring=None):
        gens = list(gens)
        ring = ring or gens[0].ring
        return cls(ring, gens)

    def groebner(self, **kw):
        if self._gb is None:
            self._gb = buchberger(self.gens, self.ring, **kw)
        return self._gb

    def contains(self, f):
        return self.groebner().contains(f)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.groebner() == other.groebner()

    def radical_contains(self, f):
        return radical_membership(f, self)


def radical_membership(f, ideal):
    """Whether some power of f lies in the ideal (Rabinowitsch trick)."""
    if f.is_zero():
        return True
    ring = ideal.ring
    fresh = None
    for name in "tuvwxyzsrqponmlkjihgfedcba":
        if name not in ring._index:
            fresh = name
            break
    if fresh is None:
        raise ValueError("no free letter for the Rabinowitsch variable")
    ext = ring.extend(fresh)
    t = ext.var(fresh)
    gens = [ring.convert(g, ext) for g in ideal.gens]
    gens.append(ext.one() - t * ring.convert(f, ext))
    gb = buchberger(gens, ext)
    return gb.is_unit_ideal()


def radical_equal(i1, i2):
    """Whether two ideals have the same radical."""
    return all(radical_membership(g, i2) for g in i1.gens) and all(
        radical_membership(g, i1) for g in i2.gens
    )


def verify_zero_set(gens, points):
    """Check that every generator vanishes at every claimed point.

    Points are dicts variable -> rational or Polynomial (symbolic families).
    Returns a list of (point, ok, failures) with failures the generator
    indices that do not vanish.
    """
    report = []
    for pt in points:
        failures = []
        for i, g in enumerate(gens):
            val = g.substitute(pt)
            if not val.is_zero():
                failures.append(i)
        report.append((pt, not failures, failures))
    return report

"""Pure-Python kernel for sparse polynomial arithmetic.

A polynomial is a dict mapping a packed exponent key (int) to a nonzero
coefficient (int, or Fraction at API boundaries).  Keys pack the exponent
vector into bit fields, total degree in the topmost field, so that integer
comparison of keys is exactly the graded-lex comparison used everywhere in
this package.  Each field keeps its top bit clear (guard bit) which makes
monomial divisibility a single subtract-and-mask.

The compiled kernel (_cycore) implements the same functions; either can be
forced via OPIDENT_PURE_PYTHON=1.
"""

from math import gcd

BACKEND = "python"

# content is re-stripped whenever coefficients outgrow this many bits
_STRIP_BITS = 512


def pmul(p, q):
    """Product of two term dicts."""
    if len(p) > len(q):
        p, q = q, p
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = m1 + m2
            c = out.get(m)
            if c is None:
                out[m] = c1 * c2
            else:
                c = c + c1 * c2
                if c:
                    out[m] = c
                else:
                    del out[m]
    return out


def pmul_term(p, c, m):
    """p times the single term c*X^m.  c must be nonzero."""
    return {m0 + m: c0 * c for m0, c0 in p.items()}


def padd(p, q):
    out = dict(p)
    for m, c in q.items():
        c0 = out.get(m)
        if c0 is None:
            out[m] = c
        else:
            c0 = c0 + c
            if c0:
                out[m] = c0
            else:
                del out[m]
    return out


def psub(p, q):
    out = dict(p)
    for m, c in q.items():
        c0 = out.get(m)
        if c0 is None:
            out[m] = -c
        else:
            c0 = c0 - c
            if c0:
                out[m] = c0
            else:
                del out[m]
    return out


def paddmul(p, c, m, q):
    """In place: p += c * X^m * q.  Returns p."""
    for m0, c0 in q.items():
        k = m0 + m
        c1 = p.get(k)
        if c1 is None:
            p[k] = c * c0
        else:
            c1 = c1 + c * c0
            if c1:
                p[k] = c1
            else:
                del p[k]
    return p


def pscale(p, c):
    """In place: p *= c with c != 0.  Returns p."""
    for m in p:
        p[m] = p[m] * c
    return p


def lead(p):
    """Largest key.  p must be nonempty."""
    return max(p)


def divides(m1, m2, guard):
    """Whether X^m1 divides X^m2.  guard has the top bit of every field set."""
    d = m2 - m1
    return d >= 0 and not (d & guard)


def content(p):
    """Positive gcd of the (integer) coefficients; 0 for the zero poly."""
    g = 0
    for c in p.values():
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def normalize(p):
    """Strip integer content and make the leading coefficient positive.

    In place; returns p.  Integer coefficients only.
    """
    if not p:
        return p
    g = content(p)
    if p[max(p)] < 0:
        g = -g
    if g != 1:
        for m in p:
            p[m] //= g
    return p


def pseudo_reduce(f, lms, gs, guard, total=True):
    """Fraction-free remainder of f modulo the basis gs (integer polys).

    lms[i] is the packed leading monomial of gs[i].  Scales f by positive
    integers as it goes, so the result is the remainder up to a positive
    rational unit: exactly zero iff the true remainder is zero, same
    normalized form otherwise.  Returns a new normalized dict.
    """
    f = dict(f)
    done = set()
    steps = 0
    nb = len(lms)
    while f:
        m = -1
        for k in f:
            if k > m and k not in done:
                m = k
        if m < 0:
            break
        hit = -1
        for i in range(nb):
            lm = lms[i]
            d = m - lm
            if d >= 0 and not (d & guard):
                hit = i
                break
        if hit < 0:
            if not total:
                break
            done.add(m)
            continue
        g = gs[hit]
        cf = f[m]
        cg = g[lms[hit]]
        u = gcd(cf, cg)
        a = cg // u
        b = cf // u
        if a < 0:
            a = -a
            b = -b
        if a != 1:
            pscale(f, a)
        paddmul(f, -b, m - lms[hit], g)
        steps += 1
        if steps & 15 == 0 and f:
            big = max(f.values(), key=abs)
            if big.bit_length() > _STRIP_BITS:
                normalize_content(f)
    return normalize(f)


def normalize_content(p):
    """Strip integer content only (keep sign).  In place."""
    g = content(p)
    if g > 1:
        for m in p:
            p[m] //= g
    return p


# rank over GF(p) can only be <= the rational rank, so a full-rank result
# is an exact certificate; any smaller value falls back to rank_int
RANK_PRIME = 2147483647


def rank_mod(rows, ncols, p=RANK_PRIME):
    """Rank of an integer matrix over GF(p).  Non-destructive."""
    m = [[v % p for v in row] for row in rows]
    nrows = len(m)
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[piv], m[r] = m[r], m[piv]
        mr = m[r]
        inv = pow(mr[c], p - 2, p)
        for i in range(r + 1, nrows):
            v = m[i][c]
            if v:
                f = v * inv % p
                mi = m[i]
                for j in range(c + 1, ncols):
                    mi[j] = (mi[j] - f * mr[j]) % p
                mi[c] = 0
        r += 1
        if r == nrows:
            break
    return r


def rank_int(rows, ncols):
    """Rank of an integer matrix by fraction-free elimination.  Destructive."""
    m = len(rows)
    r = 0
    prev = 1
    for c in range(ncols):
        piv = -1
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[piv], rows[r] = rows[r], rows[piv]
        rp = rows[r]
        pv = rp[c]
        for i in range(r + 1, m):
            ri = rows[i]
            v = ri[c]
            if v:
                for j in range(c + 1, ncols):
                    ri[j] = (pv * ri[j] - v * rp[j]) // prev
                ri[c] = 0
            elif prev != 1 or pv != 1:
                for j in range(c + 1, ncols):
                    ri[j] = (pv * ri[j]) // prev
        prev = pv
        r += 1
        if r == m:
            break
    return r

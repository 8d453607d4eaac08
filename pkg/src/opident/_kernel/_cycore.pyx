# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: same contract as pycore, selected automatically at
import when the extension built.  Coefficients stay arbitrary-precision
Python ints (Bareiss/Buchberger intermediates overflow machine words); the
wins are loop dispatch, the GF(p) rank path in pure C, and cheaper dict
traffic.  Keep the two implementations in lockstep: the parity test suite
drives both through the same inputs.
"""

from math import gcd

from libc.stdlib cimport free, malloc

BACKEND = "cython"

_STRIP_BITS = 512

RANK_PRIME = 2147483647


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


def normalize_content(p):
    """Strip integer content only (keep sign).  In place."""
    g = content(p)
    if g > 1:
        for m in p:
            p[m] //= g
    return p


def pseudo_reduce(f, lms, gs, guard, total=True):
    """Fraction-free remainder of f modulo the basis gs (integer polys).

    Same contract as the pure version: result is the remainder up to a
    positive rational unit, normalized.
    """
    cdef Py_ssize_t nb = len(lms)
    cdef Py_ssize_t i, hit
    cdef long long steps = 0
    f = dict(f)
    done = set()
    while f:
        m = None
        for k in f:
            if k not in done and (m is None or k > m):
                m = k
        if m is None:
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
        lmh = lms[hit]
        cf = f[m]
        cg = g[lmh]
        u = gcd(cf, cg)
        a = cg // u
        b = cf // u
        if a < 0:
            a = -a
            b = -b
        if a != 1:
            pscale(f, a)
        paddmul(f, -b, m - lmh, g)
        steps += 1
        if steps & 15 == 0 and f:
            big = max(f.values(), key=abs)
            if big.bit_length() > _STRIP_BITS:
                normalize_content(f)
    return normalize(f)


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a != 0 mod p, p prime
    cdef long long t = 0, new_t = 1
    cdef long long r = p, new_r = a
    cdef long long q, tmp
    while new_r != 0:
        q = r / new_r
        tmp = t - q * new_t
        t = new_t
        new_t = tmp
        tmp = r - q * new_r
        r = new_r
        new_r = tmp
    if t < 0:
        t += p
    return t


def rank_mod(rows, Py_ssize_t ncols, long long p=RANK_PRIME):
    """Rank of an integer matrix over GF(p).  Non-destructive."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, c, r, piv, base, rbase
    cdef long long v, f, inv
    if nrows == 0 or ncols == 0:
        return 0
    cdef long long *m = <long long *> malloc(nrows * ncols * sizeof(long long))
    if m == NULL:
        raise MemoryError()
    try:
        i = 0
        for row in rows:
            j = 0
            for e in row:
                # object-level reduction first: entries may exceed 64 bits
                m[i * ncols + j] = <long long> (e % p)
                j += 1
            i += 1
        r = 0
        for c in range(ncols):
            piv = -1
            for i in range(r, nrows):
                if m[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                base = piv * ncols
                rbase = r * ncols
                for j in range(c, ncols):
                    v = m[base + j]
                    m[base + j] = m[rbase + j]
                    m[rbase + j] = v
            rbase = r * ncols
            inv = _inv_mod(m[rbase + c], p)
            for i in range(r + 1, nrows):
                base = i * ncols
                v = m[base + c]
                if v != 0:
                    f = (v * inv) % p
                    for j in range(c + 1, ncols):
                        # keep residues canonical: C % truncates toward zero
                        v = (m[base + j] - f * m[rbase + j]) % p
                        if v < 0:
                            v += p
                        m[base + j] = v
                    m[base + c] = 0
            r += 1
            if r == nrows:
                break
        return r
    finally:
        free(m)


def rank_int(rows, Py_ssize_t ncols):
    """Rank of an integer matrix by fraction-free elimination.  Destructive."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t c, i, j, piv
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

"""Exact multivariate polynomials over the rationals.

The ring fixes a variable precedence (first name is smallest) and a graded
lexicographic order: monomials compare by total degree first, ties broken by
the exponent of the *last* variable in precedence, then the next-to-last, and
so on.  With variables a, b, ..., f this puts f^2 above e*f above e^2 above
d*f, and c*e above c*d, matching the conventions of the reduced Groebner
bases this package reproduces.

Exponent vectors are packed into integer keys, 8 bits per variable with the
total degree in the top field, so that comparing keys as integers compares
monomials in the ring order.  The term containers themselves are plain dicts
handled by the kernel functions in opident._kernel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ._kernel import impl as _k

_FIELD_BITS = 8
_MAX_EXP = 127


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order tag: kind plus the variable precedence it refers to.

    Only "deglex" is implemented.  key(exps) returns a sort key realizing the
    order on raw exponent tuples; the packed-integer keys used internally
    realize the same order via plain integer comparison.
    """

    kind: str
    variables: tuple[str, ...]

    def key(self, exps):
        if self.kind != "deglex":
            raise ValueError(f"unsupported order kind: {self.kind}")
        return (sum(exps), tuple(reversed(exps)))


class PolyRing:
    """Q[v1, ..., vn] with a fixed deglex order."""

    def __init__(self, variables, order="deglex"):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if not all(n.isidentifier() for n in names):
            raise ValueError("variable names must be identifiers")
        self.variables = names
        self.nvars = len(names)
        self.order = MonomialOrder(order, names)
        if order != "deglex":
            raise ValueError(f"unsupported order kind: {order}")
        self._index = {n: i for i, n in enumerate(names)}
        self._deg_shift = _FIELD_BITS * self.nvars
        # guard mask: top bit of every field, degree field included
        g = 0
        for i in range(self.nvars + 1):
            g |= 0x80 << (_FIELD_BITS * i)
        self.guard = g
        self._zero = None
        self._one = None

    def __repr__(self):
        return f"PolyRing({','.join(self.variables)})"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.order.kind == other.order.kind
        )

    def __hash__(self):
        return hash((self.variables, self.order.kind))

    def pack(self, exps):
        """Pack an exponent tuple into an order-respecting integer key."""
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        key = 0
        total = 0
        for i, e in enumerate(exps):
            if not 0 <= e <= _MAX_EXP:
                raise ValueError(f"exponent {e} out of range 0..{_MAX_EXP}")
            key |= e << (_FIELD_BITS * i)
            total += e
        if total > _MAX_EXP:
            raise ValueError(f"total degree {total} out of range")
        return key | (total << self._deg_shift)

    def unpack(self, key):
        return tuple((key >> (_FIELD_BITS * i)) & 0xFF for i in range(self.nvars))

    def poly(self, terms):
        """Build a polynomial from {packed_key: coefficient} without copying."""
        return Polynomial(self, terms)

    def zero(self):
        if self._zero is None:
            self._zero = Polynomial(self, {})
        return self._zero

    def one(self):
        if self._one is None:
            self._one = Polynomial(self, {0: 1})
        return self._one

    def const(self, c):
        c = _coeff(c)
        return Polynomial(self, {0: c} if c else {})

    def var(self, name):
        i = self._index.get(name)
        if i is None:
            raise KeyError(f"{name} is not a variable of {self!r}")
        return Polynomial(self, {self.pack(tuple(1 if j == i else 0 for j in range(self.nvars))): 1})

    def gens(self):
        return tuple(self.var(n) for n in self.variables)

    def monomial(self, exps):
        return Polynomial(self, {self.pack(exps): 1})

    def extend(self, name):
        """A ring with one more variable, largest in precedence."""
        if name in self._index:
            raise ValueError(f"{name} already a variable")
        return PolyRing(self.variables + (name,), self.order.kind)

    def convert(self, poly, other):
        """Re-express poly in ring `other` (variables matched by name)."""
        if poly.ring is other:
            return poly
        pos = []
        for i, n in enumerate(self.variables):
            if n not in other._index:
                pos.append(None)
            else:
                pos.append(other._index[n])
        terms = {}
        for key, c in poly.terms.items():
            exps = self.unpack(key)
            out = [0] * other.nvars
            for i, e in enumerate(exps):
                if e:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.variables[i]} absent from target ring")
                    out[pos[i]] = e
            terms[other.pack(tuple(out))] = c
        return Polynomial(other, terms)

    def parse(self, text, loose=False):
        """Parse polynomial text.

        Grammar: integer constants, the ring's variables, + - * ^ and
        parentheses; multiplication requires an explicit '*'.  With
        loose=True adjacency also multiplies, which is how the transcribed
        reference tables are spelled (e.g. "be^2(d-b)").
        """
        return _parse(self, text, loose)

    def from_obj(self, obj):
        if tuple(obj["vars"]) != self.variables:
            raise ValueError("variable list mismatch")
        terms = {}
        for t in obj["terms"]:
            c = Fraction(t["num"], t.get("den", 1))
            if c:
                terms[self.pack(tuple(t["exps"]))] = _coeff(c)
        return Polynomial(self, terms)


def _coeff(c):
    # canonical coefficient: int when integral, Fraction otherwise
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else c
    raise TypeError(f"bad coefficient type {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial bound to a PolyRing.

    terms maps packed exponent keys to nonzero coefficients; coefficients are
    ints whenever the value is integral, Fraction otherwise.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms, _normalize=True):
        self.ring = ring
        if _normalize:
            clean = {}
            for m, c in terms.items():
                c = _coeff(c)
                if c:
                    clean[m] = c
            terms = clean
        self.terms = terms
        self._hash = None

    # -- basics --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self):
        """Total degree, -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.terms) >> self.ring._deg_shift

    def degree_in(self, name):
        i = self.ring._index[name]
        sh = _FIELD_BITS * i
        d = 0
        for key in self.terms:
            e = (key >> sh) & 0xFF
            if e > d:
                d = e
        return d

    def variables_present(self):
        present = set()
        for key in self.terms:
            for i, e in enumerate(self.ring.unpack(key)):
                if e:
                    present.add(self.ring.variables[i])
        return present

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        """The rational value of a constant polynomial."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and 0 in self.terms:
            return Fraction(self.terms[0])
        raise ValueError("not a constant polynomial")

    def leading_term(self):
        """(coefficient, exponent tuple) of the order-largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms)
        return (Fraction(self.terms[m]), self.ring.unpack(m))

    def leading_monomial(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.ring.unpack(max(self.terms))

    def leading_coefficient(self):
        if not self.terms:
            return Fraction(0)
        return Fraction(self.terms[max(self.terms)])

    def coefficient(self, exps):
        return Fraction(self.terms.get(self.ring.pack(exps), 0))

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("mixed rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, _k.padd(self.terms, other.terms), _normalize=False)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, _k.psub(self.terms, other.terms), _normalize=False)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, _k.psub(other.terms, self.terms), _normalize=False)

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()}, _normalize=False)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coeff(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, _k.pmul_term(self.terms, c, 0), _normalize=False)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, _k.pmul(self.terms, other.terms), _normalize=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.key()))
        return self._hash

    def key(self):
        """Canonical hashable form: terms sorted descending."""
        return tuple(sorted(((m, Fraction(c)) for m, c in self.terms.items()), reverse=True))

    # -- content and division ------------------------------------------

    def rational_content(self):
        """Positive Fraction c with self/c integer, primitive; 0 if zero."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            f = Fraction(c)
            num = gcd(num, f.numerator)
            den = den * f.denominator // gcd(den, f.denominator)
        return Fraction(num, den)

    def primitive(self):
        """(unit, primitive part): unit * part == self, part has integer
        coefficients with content 1 and positive leading coefficient."""
        if not self.terms:
            return (Fraction(0), self)
        u = self.rational_content()
        if self.terms[max(self.terms)] < 0:
            u = -u
        inv = 1 / u
        part = Polynomial(self.ring, {m: _coeff(c * inv) for m, c in self.terms.items()}, _normalize=False)
        return (u, part)

    def monic(self):
        if not self.terms:
            return self
        lc = Fraction(self.terms[max(self.terms)])
        if lc == 1:
            return self
        inv = 1 / lc
        return Polynomial(self.ring, {m: _coeff(c * inv) for m, c in self.terms.items()}, _normalize=False)

    def exact_div(self, other):
        """self/other when the division is exact, else None."""
        if not isinstance(other, Polynomial) or other.ring != self.ring:
            other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self.ring.zero()
        guard = self.ring.guard
        rem = dict(self.terms)
        lg = max(other.terms)
        cg = Fraction(other.terms[lg])
        q = {}
        while rem:
            m = max(rem)
            d = m - lg
            if d < 0 or (d & guard):
                return None
            c = Fraction(rem[m]) / cg
            q[d] = _coeff(c)
            _k.paddmul(rem, _coeff(-c), d, other.terms)
        return Polynomial(self.ring, q, _normalize=False)

    # -- substitution ----------------------------------------------------

    def substitute(self, assignment):
        """Replace variables by rationals or polynomials of the same ring.

        Partial assignments are fine; unassigned variables pass through.
        """
        ring = self.ring
        vals = {}
        for name, v in assignment.items():
            i = ring._index.get(name)
            if i is None:
                raise KeyError(f"{name} is not a variable of {ring!r}")
            if isinstance(v, Polynomial):
                if v.ring != ring:
                    raise ValueError("substitution value from a different ring")
                vals[i] = v.terms
            else:
                vals[i] = {0: _coeff(v)} if _coeff(v) else {}
        out = {}
        powcache = {}
        for key, c in self.terms.items():
            exps = ring.unpack(key)
            rest = [0] * ring.nvars
            factor = {0: c}
            for i, e in enumerate(exps):
                if not e:
                    continue
                if i in vals:
                    pk = (i, e)
                    pw = powcache.get(pk)
                    if pw is None:
                        pw = {0: 1}
                        for _ in range(e):
                            pw = _k.pmul(pw, vals[i])
                        powcache[pk] = pw
                    factor = _k.pmul(factor, pw)
                else:
                    rest[i] = e
                if not factor:
                    break
            if factor:
                base = ring.pack(tuple(rest))
                if base:
                    factor = _k.pmul_term(factor, 1, base)
                out = _k.padd(out, factor)
        return Polynomial(ring, out)

    def evaluate(self, assignment):
        """Full evaluation to a Fraction; every present variable must be set."""
        r = self.substitute(assignment)
        return r.constant_value()

    # -- factoring for display -------------------------------------------

    def factor_trial(self):
        return factor_trial(self)

    # -- text and serialization ------------------------------------------

    def text(self):
        """Canonical text: terms in decreasing order, explicit * and ^."""
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, reverse=True):
            c = self.terms[key]
            mono = self._mono_text(key)
            bits.append(_term_text(c, mono, first=not bits))
        return "".join(bits)

    def _mono_text(self, key):
        exps = self.ring.unpack(key)
        parts = []
        for n, e in zip(self.ring.variables, exps):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts)

    def factored_text(self):
        """Product-of-factors display, e.g. "b*e^2*(d-b)".  Strict grammar."""
        if not self.terms:
            return "0"
        factors = factor_trial(self)
        bits = []
        for f, k in factors:
            t = f.text()
            if len(f.terms) > 1:
                t = f"({t})"
            elif t.startswith("-"):
                t = f"({t})" if bits else t
            bits.append(t if k == 1 else f"{t}^{k}")
        return "*".join(bits)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"<{self.text()}>"

    def to_obj(self):
        terms = []
        for key in sorted(self.terms, reverse=True):
            c = Fraction(self.terms[key])
            terms.append({"exps": list(self.ring.unpack(key)), "num": c.numerator, "den": c.denominator})
        return {"vars": list(self.ring.variables), "terms": terms}

    def to_json(self):
        return json.dumps(self.to_obj())


def _term_text(c, mono, first):
    neg = c < 0
    mag = -c if neg else c
    if first:
        sign = "-" if neg else ""
    else:
        sign = " - " if neg else " + "
    cstr = str(mag)
    if not mono:
        return f"{sign}{cstr}"
    if mag == 1:
        return f"{sign}{mono}"
    return f"{sign}{cstr}*{mono}"


# -- parsing -------------------------------------------------------------


class _Tok:
    __slots__ = ("kind", "val")

    def __init__(self, kind, val=None):
        self.kind = kind
        self.val = val


def _tokenize(text):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", int(text[i:j])))
            i = j
            continue
        if ch.isalpha():
            toks.append(_Tok("var", ch))
            i += 1
            continue
        if ch in "+-*^()":
            toks.append(_Tok(ch))
            i += 1
            continue
        raise ValueError(f"bad character {ch!r} in polynomial text")
    toks.append(_Tok("end"))
    return toks


class _Parser:
    def __init__(self, ring, toks, loose):
        self.ring = ring
        self.toks = toks
        self.pos = 0
        self.loose = loose

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expr(self):
        sign = 1
        if self.peek().kind in "+-":
            if self.take().kind == "-":
                sign = -1
        p = self.term() * sign
        while self.peek().kind in "+-":
            if self.take().kind == "-":
                p = p - self.term()
            else:
                p = p + self.term()
        return p

    def term(self):
        p = self.factor()
        while True:
            t = self.peek()
            if t.kind == "*":
                self.take()
                p = p * self.factor()
            elif self.loose and t.kind in ("int", "var", "("):
                p = p * self.factor()
            else:
                return p

    def factor(self):
        p = self.atom()
        if self.peek().kind == "^":
            self.take()
            t = self.take()
            if t.kind != "int":
                raise ValueError("exponent must be an integer")
            p = p ** t.val
        return p

    def atom(self):
        t = self.take()
        if t.kind == "int":
            return self.ring.const(t.val)
        if t.kind == "var":
            return self.ring.var(t.val)
        if t.kind == "(":
            p = self.expr()
            if self.take().kind != ")":
                raise ValueError("unbalanced parentheses")
            return p
        if t.kind == "-":
            # unary minus inside a product position, e.g. "a*-b" is rejected;
            # only leading minus in expr() is allowed
            raise ValueError("misplaced '-'")
        raise ValueError(f"unexpected token {t.kind!r}")


def _parse(ring, text, loose):
    p = _Parser(ring, _tokenize(text), loose)
    out = p.expr()
    if p.peek().kind != "end":
        raise ValueError(f"trailing input in polynomial text: {text!r}")
    return out


# -- trial factoring ------------------------------------------------------


def factor_trial(p):
    """Split p into small factors by trial division.

    Returns a list of (factor, multiplicity) whose product equals p exactly.
    Pulls out the rational unit, per-variable monomial content, then
    repeatedly divides by small linear (and a few quadratic) candidates with
    unit-sized coefficients.  Every non-constant factor is normalized to a
    positive leading coefficient; whatever remains unsplit is appended as a
    single factor.  This is a display aid, not a complete factorization.
    """
    ring = p.ring
    if not p.terms:
        return [(p, 1)]
    unit, q = p.primitive()
    factors = []
    # monomial content
    mins = list(q.leading_monomial())
    for key in q.terms:
        for i, e in enumerate(ring.unpack(key)):
            if e < mins[i]:
                mins[i] = e
    if any(mins):
        shift = ring.pack(tuple(mins))
        q = Polynomial(ring, {m - shift: c for m, c in q.terms.items()}, _normalize=False)
        for i, e in enumerate(mins):
            if e:
                factors.append((ring.var(ring.variables[i]), e))
    present = sorted(q.variables_present(), key=ring._index.get)
    for cand in _candidates(ring, present):
        if q.is_constant():
            break
        if q.total_degree() < cand.total_degree():
            continue
        mult = 0
        while True:
            d = q.exact_div(cand)
            if d is None:
                break
            q = d
            mult += 1
        if mult:
            factors.append((cand, mult))
    if q.is_constant():
        unit *= q.constant_value()
    else:
        u2, part = q.primitive()
        unit *= u2
        factors.append((part, 1))
    if unit != 1:
        factors.insert(0, (ring.const(unit), 1))
    prod = ring.one()
    for f, k in factors:
        prod = prod * f ** k
    if prod != p:  # defensive: never present a wrong factorization
        return [(p, 1)]
    return factors


def _candidates(ring, names):
    """Small-factor candidates over the given variables, deterministic order,
    each with positive leading coefficient under the ring order."""
    vs = [ring.var(n) for n in names]
    out = []
    for v in vs:
        for k in (1, -1, 2, -2, 3, -3):
            out.append(v + k)
    # ring order makes the later-precedence variable the leading term
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            for s in (1, -1):
                out.append(vs[j] + s * vs[i])
                for k in (1, -1):
                    out.append(vs[j] + s * vs[i] + k)
    for i in range(len(vs)):
        for j in range(len(vs)):
            if i != j:
                for s in (1, -1):
                    out.append(vs[i] ** 2 + s * vs[j])
    # three-variable sums, unit coefficients
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            for k in range(j + 1, len(vs)):
                for s1 in (1, -1):
                    for s2 in (1, -1):
                        out.append(vs[k] + s1 * vs[j] + s2 * vs[i])
                        for c in (1, -1):
                            out.append(vs[k] + s1 * vs[j] + s2 * vs[i] + c)
    return out


def poly_from_json(text):
    obj = json.loads(text)
    ring = PolyRing(tuple(obj["vars"]))
    return ring.from_obj(obj)

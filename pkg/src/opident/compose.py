"""Partial compositions of operator monomials and consequence generation.

Four surgeries on an operator monomial m of degree p and multiplicity q:

* comp_m_B(m, i): split argument i into a product of two fresh arguments
  (degree p+1).  The split slot flattens into an enclosing product.
* comp_B_m(m, j): multiply m by a fresh argument on the right (j=1) or the
  left (j=2) (degree p+1).
* comp_m_L(m, i): apply L to argument i (multiplicity q+1).
* comp_L_m(m): apply L to the whole monomial (multiplicity q+1).  By
  definition this wraps the root, so e.g. L(L(w)xL(y))z maps to
  L(L(L(w)xL(y))z); a display elsewhere that pushes the new L past the
  trailing argument does not match the definition and is not reproduced.

Arguments are renumbered left to right after every surgery, which the
anonymous-leaf tree encoding gives for free.

consequences(R) lists, in a frozen order, the consequences of the identity
R = 0 that live one degree and one multiplicity higher: both-route
compositions (degree first then multiplicity, and vice versa) with
duplicates marked.  For degree p the raw list has (p+2)*(2p+3) entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .monomials import ARG, OperatorMonomial


def _splice(children):
    # flatten products nested directly under a product
    out = []
    for c in children:
        if c != ARG and c[0] == "P":
            out.extend(c[1:])
        else:
            out.append(c)
    return out


def _replace_arg(node, target, repl, counter):
    """Rebuild node with the target-th argument leaf (1-based) replaced."""
    if node == ARG:
        counter[0] += 1
        return repl if counter[0] == target else node
    if node[0] == "L":
        return ("L", _replace_arg(node[1], target, repl, counter))
    kids = [_replace_arg(c, target, repl, counter) for c in node[1:]]
    return ("P", *_splice(kids))


def _check_index(m, i):
    if not 1 <= i <= m.degree:
        raise ValueError(f"argument index {i} out of range 1..{m.degree}")


def comp_m_B(m, i):
    """Split argument i of m into two adjacent arguments."""
    _check_index(m, i)
    node = _replace_arg(m.node, i, ("P", ARG, ARG), [0])
    return OperatorMonomial(node)


def comp_B_m(m, j):
    """Multiply m by one fresh argument: j=1 appends, j=2 prepends."""
    if j not in (1, 2):
        raise ValueError("outer product index must be 1 or 2")
    base = list(m.node[1:]) if (m.node != ARG and m.node[0] == "P") else [m.node]
    kids = base + [ARG] if j == 1 else [ARG] + base
    return OperatorMonomial(("P", *kids))


def comp_m_L(m, i):
    """Apply L to argument i of m."""
    _check_index(m, i)
    node = _replace_arg(m.node, i, ("L", ARG), [0])
    return OperatorMonomial(node)


def comp_L_m(m):
    """Apply L to the whole monomial."""
    return OperatorMonomial(("L", m.node))


class OperatorPolynomial:
    """Linear combination of same-degree, same-multiplicity monomials with
    coefficients in a polynomial ring."""

    __slots__ = ("ring", "coeffs", "degree", "multiplicity")

    def __init__(self, ring, coeffs):
        clean = {}
        deg = mult = None
        for m, c in coeffs.items():
            if not isinstance(m, OperatorMonomial):
                raise TypeError("keys must be OperatorMonomial")
            if c.ring != ring:
                raise ValueError("coefficient from a different ring")
            if c.is_zero():
                continue
            if deg is None:
                deg, mult = m.degree, m.multiplicity
            elif (m.degree, m.multiplicity) != (deg, mult):
                raise ValueError("mixed degree or multiplicity")
            clean[m] = c
        self.ring = ring
        self.coeffs = clean
        self.degree = deg
        self.multiplicity = mult

    @classmethod
    def from_items(cls, ring, items):
        acc = {}
        for m, c in items:
            acc[m] = acc[m] + c if m in acc else c
        return cls(ring, acc)

    def items(self):
        """(monomial, coefficient) pairs in monomial order."""
        return sorted(self.coeffs.items(), key=lambda mc: mc[0])

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, OperatorPolynomial)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.key()))

    def key(self):
        return tuple((m.paren, c.key()) for m, c in self.items())

    def __add__(self, other):
        if not isinstance(other, OperatorPolynomial) or other.ring != self.ring:
            return NotImplemented
        acc = dict(self.coeffs)
        for m, c in other.coeffs.items():
            acc[m] = acc[m] + c if m in acc else c
        return OperatorPolynomial(self.ring, acc)

    def __sub__(self, other):
        if not isinstance(other, OperatorPolynomial) or other.ring != self.ring:
            return NotImplemented
        acc = dict(self.coeffs)
        for m, c in other.coeffs.items():
            acc[m] = acc[m] - c if m in acc else -c
        return OperatorPolynomial(self.ring, acc)

    def __mul__(self, scalar):
        return OperatorPolynomial(self.ring, {m: c * scalar for m, c in self.coeffs.items()})

    __rmul__ = __mul__

    def apply(self, fn):
        """Linear extension of a monomial map fn."""
        return OperatorPolynomial.from_items(
            self.ring, ((fn(m), c) for m, c in self.coeffs.items())
        )

    def substitute(self, assignment):
        return OperatorPolynomial(
            self.ring, {m: c.substitute(assignment) for m, c in self.coeffs.items()}
        )

    def render(self, style="star", collapse=False):
        if not self.coeffs:
            return "0"
        bits = []
        for m, c in self.items():
            mono = m.render(style, collapse)
            bits.append(_coef_mono_text(c, mono, first=not bits))
        return "".join(bits)

    def __repr__(self):
        return f"<{self.render()}>"


def _coef_mono_text(c, mono, first):
    if len(c.terms) == 1:
        coef = next(iter(c.terms.values()))
        neg = coef < 0
        body = (-c if neg else c).text()
        sep = ("-" if neg else "") if first else (" - " if neg else " + ")
        if body == "1":
            return f"{sep}{mono}"
        if "*" in body or "^" in body or "/" in body:
            return f"{sep}({body}){mono}"
        return f"{sep}{body}{mono}"
    sep = "" if first else " + "
    return f"{sep}({c.text()}){mono}"


@dataclass
class Consequence:
    """One derived identity in the (degree+1, multiplicity+1) space."""

    word: str
    inner: tuple
    outer: tuple
    opoly: OperatorPolynomial
    duplicate_of: int | None = None


def _inner_word(inner):
    kind = inner[0]
    if kind == "RB":
        return f"R ∘{inner[1]} B"
    if kind == "BR":
        return f"B ∘{inner[1]} R"
    if kind == "RL":
        return f"R ∘{inner[1]} L"
    return "L ∘ R"


def consequences(R):
    """All consequences of R = 0 one degree and one multiplicity up.

    Frozen listing order: first the degree-raising inner compositions
    (R composed with a product split at each argument, then the two outer
    products), each followed by all of its multiplicity-raising outer
    variants (L at arguments 1..p+1, then L outside); then the
    multiplicity-raising inner compositions (L at arguments 1..p, then L
    outside), each followed by its degree-raising outer variants (argument
    splits 1..p, then the two outer products).  Duplicates are marked with
    the index of their first occurrence, never dropped here.
    """
    p = R.degree
    if p is None:
        raise ValueError("cannot take consequences of the zero element")
    entries = []
    seen = {}

    def emit(word, inner, outer, opoly):
        k = opoly.key()
        dup = seen.get(k)
        if dup is None:
            seen[k] = len(entries)
        entries.append(Consequence(word, inner, outer, opoly, dup))

    # degree first, multiplicity second
    inners = [(("RB", i), R.apply(lambda m, i=i: comp_m_B(m, i))) for i in range(1, p + 1)]
    inners += [(("BR", j), R.apply(lambda m, j=j: comp_B_m(m, j))) for j in (1, 2)]
    for inner, S in inners:
        iw = _inner_word(inner)
        for k in range(1, p + 2):
            emit(f"({iw}) ∘{k} L", inner, ("mL", k), S.apply(lambda m, k=k: comp_m_L(m, k)))
        emit(f"L ∘ ({iw})", inner, ("Lm",), S.apply(comp_L_m))

    # multiplicity first, degree second
    inners = [(("RL", i), R.apply(lambda m, i=i: comp_m_L(m, i))) for i in range(1, p + 1)]
    inners += [(("LR",), R.apply(comp_L_m))]
    for inner, S in inners:
        iw = _inner_word(inner)
        for k in range(1, p + 1):
            emit(f"({iw}) ∘{k} B", inner, ("mB", k), S.apply(lambda m, k=k: comp_m_B(m, k)))
        for j in (1, 2):
            emit(f"B ∘{j} ({iw})", inner, ("Bm", j), S.apply(lambda m, j=j: comp_B_m(m, j)))
    return entries


def distinct_consequences(entries):
    """The non-duplicate consequences, first occurrences, order preserved."""
    return [e for e in entries if e.duplicate_of is None]

"""Operator monomials and their enumeration.

An operator monomial in arguments x1..xp with q applications of a linear
operator L is encoded as a tree with three node kinds: an argument leaf, a
unary L-application, and an associative product of at least two children
(never directly nested under another product).  Monomials of degree p and
multiplicity q correspond bijectively to balanced parenthesis strings of
length 2(p+q) with exactly p nestings, a nesting being an occurrence of the
substring "()": each nesting is an argument slot and every other left
parenthesis is an L.  Under that bijection the number of such monomials is
the Narayana number N(p+q, p), and the dictionary order on parenthesis
strings ('(' before ')') is the order all basis tables use.

Node encoding: "*" for an argument leaf, ("L", child) for an application,
("P", c1, c2, ...) for a product.
"""

from __future__ import annotations

from itertools import repeat
from math import comb

ARG = "*"


def narayana(i, j):
    """Narayana number N(i, j) = C(i, j) * C(i, j-1) / i."""
    if i < 1 or j < 1 or j > i:
        raise ValueError(f"narayana undefined for ({i}, {j})")
    return comb(i, j) * comb(i, j - 1) // i


def _parse_paren(s):
    """Balanced parenthesis string -> node tree."""
    items, pos = _parse_items(s, 0)
    if pos != len(s):
        raise ValueError(f"unbalanced parenthesis string: {s!r}")
    if not items:
        raise ValueError("empty parenthesis string")
    if len(items) == 1:
        return items[0]
    return ("P", *items)


def _parse_items(s, pos):
    items = []
    while pos < len(s) and s[pos] == "(":
        if pos + 1 < len(s) and s[pos + 1] == ")":
            items.append(ARG)
            pos += 2
            continue
        inner, pos2 = _parse_items(s, pos + 1)
        if pos2 >= len(s) or s[pos2] != ")":
            raise ValueError(f"unbalanced parenthesis string: {s!r}")
        pos = pos2 + 1
        if not inner:
            raise ValueError(f"unbalanced parenthesis string: {s!r}")
        child = inner[0] if len(inner) == 1 else ("P", *inner)
        items.append(("L", child))
    return items, pos


def _to_paren(node):
    if node == ARG:
        return "()"
    if node[0] == "L":
        return "(" + _inner_paren(node[1]) + ")"
    return _inner_paren(node)


def _inner_paren(node):
    if node != ARG and node[0] == "P":
        return "".join(_to_paren(c) for c in node[1:])
    return _to_paren(node)


def _check_node(node):
    if node == ARG:
        return (1, 0)
    if not isinstance(node, tuple) or not node:
        raise ValueError(f"bad node {node!r}")
    if node[0] == "L":
        if len(node) != 2:
            raise ValueError("L node must have exactly one child")
        p, q = _check_node(node[1])
        return (p, q + 1)
    if node[0] == "P":
        kids = node[1:]
        if len(kids) < 2:
            raise ValueError("product node needs at least two children")
        p = q = 0
        for c in kids:
            if c != ARG and c[0] == "P":
                raise ValueError("product directly nested under product")
            cp, cq = _check_node(c)
            p += cp
            q += cq
        return (p, q)
    raise ValueError(f"bad node tag {node[0]!r}")


class OperatorMonomial:
    """One operator monomial, immutable, ordered by its parenthesis string."""

    __slots__ = ("node", "paren", "degree", "multiplicity")

    def __init__(self, node):
        p, q = _check_node(node)
        object.__setattr__(self, "node", node)
        object.__setattr__(self, "paren", _to_paren(node))
        object.__setattr__(self, "degree", p)
        object.__setattr__(self, "multiplicity", q)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorMonomial is immutable")

    @classmethod
    def from_paren(cls, s):
        return cls(_parse_paren(s))

    def __eq__(self, other):
        return isinstance(other, OperatorMonomial) and self.node == other.node

    def __hash__(self):
        return hash(self.node)

    def __lt__(self, other):
        return (len(self.paren), self.paren) < (len(other.paren), other.paren)

    def __le__(self, other):
        return self == other or self < other

    def __repr__(self):
        return f"OperatorMonomial({self.paren!r})"

    # -- rendering -------------------------------------------------------

    def star(self, collapse=False):
        """Render with '*' placeholders, e.g. "L(L(*)**)"."""
        return _render(self.node, repeat(ARG), collapse)

    def letters(self, collapse=False):
        """Render with named arguments, e.g. "L(L(v)wx)".

        Up to five arguments use v, w, x, y, z chosen so that small cases
        read x, then x y, then x y z; beyond five the names are x1, x2, ...
        With collapse=True towers of L print as powers: L(L(xy)) -> L2(xy).
        """
        return _render(self.node, iter(_letter_names(self.degree)), collapse)

    def render(self, style="star", collapse=False):
        if style == "star":
            return self.star(collapse)
        if style == "letters":
            return self.letters(collapse)
        if style == "paren":
            return self.paren
        raise ValueError(f"unknown render style {style!r}")


def _letter_names(p):
    if p <= 5:
        start = 2 if p <= 3 else 5 - p
        return list("vwxyz"[start : start + p])
    return [f"x{i}" for i in range(1, p + 1)]


def _render(node, symbols, collapse):
    if node == ARG:
        return next(symbols)
    if node[0] == "P":
        return "".join(_render(c, symbols, collapse) for c in node[1:])
    # L tower
    k = 0
    while node != ARG and node[0] == "L":
        k += 1
        node = node[1]
    body = _render(node, symbols, collapse) if node == ARG or node[0] != "P" else "".join(
        _render(c, symbols, collapse) for c in node[1:]
    )
    if collapse:
        head = "L" if k == 1 else f"L{k}"
        return f"{head}({body})"
    return "L(" * k + body + ")" * k


def enumerate_monomials(p, q):
    """All monomials of degree p, multiplicity q, in dictionary order.

    Generates the balanced parenthesis strings of length 2(p+q) with exactly
    p nestings directly in lexicographic order ('(' sorts before ')').  The
    list has length narayana(p+q, p).
    """
    if p < 1:
        raise ValueError("degree must be at least 1")
    if q < 0:
        raise ValueError("multiplicity must be nonnegative")
    n = p + q
    out = []
    buf = []

    def walk(opens, closes, nest, last):
        if opens == n and closes == n:
            if nest == p:
                out.append("".join(buf))
            return
        rem_open = n - opens
        need = p - nest
        # bounds on nestings any completion can still add
        hi = rem_open + (1 if last == "(" else 0)
        if rem_open > 0:
            lo = 1
        else:
            lo = 1 if (last == "(" and closes < n) else 0
        if not lo <= need <= hi:
            return
        if opens < n:
            buf.append("(")
            walk(opens + 1, closes, nest, "(")
            buf.pop()
        if closes < opens:
            buf.append(")")
            walk(opens, closes + 1, nest + (1 if last == "(" else 0), ")")
            buf.pop()

    walk(0, 0, 0, "")
    return [OperatorMonomial.from_paren(s) for s in out]


def basis_index(monomials):
    """Map paren string -> position for a basis list."""
    return {m.paren: i for i, m in enumerate(monomials)}


def dimension(p, q):
    """Number of monomials of degree p and multiplicity q."""
    if p < 1 or q < 0:
        raise ValueError("degree must be >= 1 and multiplicity >= 0")
    return narayana(p + q, p)

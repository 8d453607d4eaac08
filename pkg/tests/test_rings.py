"""Polynomial ring tests: packing, deglex order, arithmetic, parsing, display."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from opident.rings import MonomialOrder, PolyRing, factor_trial, poly_from_json

R = PolyRing(("a", "b", "c", "d", "e", "f"))
A, B, C, D, E, F = R.gens()


def exps_lists(nvars=6, max_exp=5):
    return st.lists(st.integers(0, max_exp), min_size=nvars, max_size=nvars).map(tuple)


@st.composite
def polys(draw, max_terms=6, max_exp=4):
    terms = draw(
        st.lists(
            st.tuples(exps_lists(max_exp=max_exp), st.integers(-9, 9)),
            max_size=max_terms,
        )
    )
    p = R.zero()
    for exps, coef in terms:
        p = p + R.const(coef) * R.monomial(exps)
    return p


# -- packing and order -----------------------------------------------------


@given(exps_lists())
def test_pack_unpack_roundtrip(exps):
    assert R.unpack(R.pack(exps)) == exps


@given(exps_lists(), exps_lists())
def test_packed_keys_realize_deglex(x, y):
    order = MonomialOrder("deglex", R.variables)
    kx, ky = R.pack(x), R.pack(y)
    assert (kx < ky) == (order.key(x) < order.key(y))
    assert (kx == ky) == (x == y)


def test_deglex_tiebreak_last_variable_first():
    # same total degree: the later-precedence variable decides
    singles = [R.pack(tuple(int(i == j) for j in range(6))) for i in range(6)]
    assert singles == sorted(singles)  # a < b < c < d < e < f
    assert R.pack((1, 0, 0, 0, 0, 1)) > R.pack((0, 1, 1, 0, 0, 0))  # af > bc
    # degree dominates everything
    assert R.pack((3, 0, 0, 0, 0, 0)) > R.pack((0, 0, 0, 0, 0, 2))  # a^3 > f^2


def test_pack_rejects_bad_input():
    with pytest.raises(ValueError):
        R.pack((1, 2, 3))
    with pytest.raises(ValueError):
        R.pack((-1, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        R.pack((128, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        R.pack((127, 127, 0, 0, 0, 0))  # total degree overflows the top field


def test_ring_identity():
    assert PolyRing(("a", "b")) == PolyRing(("a", "b"))
    assert PolyRing(("a", "b")) != PolyRing(("b", "a"))
    assert hash(PolyRing(("a", "b"))) == hash(PolyRing(("a", "b")))


# -- arithmetic ------------------------------------------------------------


@given(polys(), polys(), polys())
@settings(max_examples=60)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + R.zero() == p
    assert p * R.one() == p
    assert p - p == R.zero()


@given(polys(max_terms=4), polys(max_terms=4))
@settings(max_examples=60)
def test_leading_term_multiplicative(p, q):
    if p.is_zero() or q.is_zero():
        assert (p * q).is_zero()
        return
    cp, mp = p.leading_term()
    cq, mq = q.leading_term()
    c, m = (p * q).leading_term()
    assert m == tuple(x + y for x, y in zip(mp, mq))
    assert c == cp * cq


@given(polys(max_terms=4), polys(max_terms=4))
@settings(max_examples=60)
def test_exact_div_inverts_multiplication(p, q):
    if q.is_zero():
        with pytest.raises(ZeroDivisionError):
            p.exact_div(q)
        return
    assert (p * q).exact_div(q) == p


def test_exact_div_returns_none_when_inexact():
    assert (A * A + B).exact_div(A + 1) is None
    assert (A + 1).exact_div(A * A + B) is None


def test_pow_and_scalar_ops():
    p = A + 2 * B - 1
    assert p**0 == R.one()
    assert p**3 == p * p * p
    assert p / 2 == R.const(Fraction(1, 2)) * p
    assert 1 - p == R.one() - p
    assert -p + p == R.zero()


@given(polys())
@settings(max_examples=60)
def test_primitive_decomposition(p):
    unit, part = p.primitive()
    assert R.const(unit) * part == p
    if not p.is_zero():
        assert part.rational_content() == 1
        assert part.leading_coefficient() > 0
        assert p.monic().leading_coefficient() == 1


def test_degrees_and_support():
    p = A * B**2 + C - 5
    assert p.total_degree() == 3
    assert p.degree_in("b") == 2
    assert p.degree_in("f") == 0
    assert p.variables_present() == {"a", "b", "c"}
    assert R.const(3).is_constant() and R.const(3).constant_value() == 3
    assert not p.is_constant()
    assert p.coefficient((1, 2, 0, 0, 0, 0)) == 1
    assert p.coefficient((0, 0, 0, 0, 0, 1)) == 0


# -- substitution ----------------------------------------------------------


def test_substitute_partial_and_symbolic():
    p = (A + B) ** 2
    assert p.substitute({"a": 1}) == B**2 + 2 * B + 1
    assert p.substitute({"a": B}) == 4 * B**2
    assert p.substitute({}) == p
    # unassigned variables pass through
    q = (A + F).substitute({"a": Fraction(1, 2)})
    assert q == F + Fraction(1, 2)
    with pytest.raises(KeyError):
        p.substitute({"z": 1})


@given(polys(max_terms=5, max_exp=3))
@settings(max_examples=40)
def test_evaluate_agrees_with_horner_free_substitution(p):
    point = {n: Fraction(i - 2, 3) for i, n in enumerate(R.variables)}
    expect = sum(
        (Fraction(c) * _mono_value(R.unpack(k), point) for k, c in p.terms.items()),
        Fraction(0),
    )
    assert p.evaluate(point) == expect


def _mono_value(exps, point):
    v = Fraction(1)
    for name, e in zip(R.variables, exps):
        v *= point[name] ** e
    return v


# -- parsing and text ------------------------------------------------------


@given(polys())
@settings(max_examples=80)
def test_text_parse_roundtrip(p):
    assert R.parse(p.text()) == p


def test_text_spelling():
    assert R.zero().text() == "0"
    assert (A - B).text() == "-b + a"  # b > a under the order, so b prints first
    assert (2 * F**2 - E + 1).text() == "2*f^2 - e + 1"
    assert str(-A) == "-a"


def test_parse_strict_grammar():
    assert R.parse("a^2-2*a*b+b^2") == (A - B) ** 2
    assert R.parse("-a+3") == 3 - A
    with pytest.raises(ValueError):
        R.parse("a b")  # adjacency needs loose=True
    with pytest.raises(ValueError):
        R.parse("(a+b")
    with pytest.raises(ValueError):
        R.parse("a*-b")
    with pytest.raises(ValueError):
        R.parse("a^b")
    with pytest.raises((KeyError, ValueError)):
        R.parse("x+1")
    with pytest.raises(ValueError):
        R.parse("a$b")


def test_parse_loose_adjacency():
    assert R.parse("be^2(d-b)", loose=True) == B * E**2 * (D - B)
    assert R.parse("2b^2cd+dcb-ecb", loose=True) == 2 * B**2 * C * D + D * C * B - E * C * B
    assert R.parse("c(c+1)", loose=True) == C * (C + 1)


@given(polys())
@settings(max_examples=60)
def test_factor_trial_product_exact(p):
    factors = factor_trial(p)
    prod = R.one()
    for f, k in factors:
        prod = prod * f**k
    assert prod == p


@given(polys())
@settings(max_examples=60)
def test_factored_text_reparses_strict(p):
    assert R.parse(p.factored_text()) == p


def test_factor_trial_finds_small_factors():
    got = {f.text(): k for f, k in factor_trial(F * (F + 1) * E**2)}
    assert got == {"e": 2, "f": 1, "f + 1": 1}


# -- serialization ---------------------------------------------------------


@given(polys())
@settings(max_examples=60)
def test_json_roundtrip(p):
    assert poly_from_json(p.to_json()) == p
    assert R.from_obj(p.to_obj()) == p


def test_from_obj_checks_variables():
    with pytest.raises(ValueError):
        PolyRing(("x", "y")).from_obj((A + 1).to_obj())


# -- ring extension (used by radical membership) ----------------------------


def test_extend_and_convert():
    S = R.extend("g")
    assert S.variables == R.variables + ("g",)
    p = A * B + F**2
    q = R.convert(p, S)
    assert q.ring == S and q.text() == p.text()
    assert S.convert(q, R) == p
    with pytest.raises(ValueError):
        S.convert(S.var("g"), R)
    with pytest.raises(ValueError):
        R.extend("a")

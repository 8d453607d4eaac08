"""Transcription lint: every bundled table re-parses and satisfies the shape
and balance invariants its format promises.  Content-level agreement with the
computation lives in the per-module tests; this file guards the files
themselves against silent corruption."""

from fractions import Fraction

import pytest

from opident import tables
from opident.monomials import OperatorMonomial
from opident.rings import PolyRing, Polynomial

ALL_FILES = [
    "p2q123.txt",
    "basis32.txt",
    "basis33.txt",
    "conmat21.txt",
    "conmat22.txt",
    "case1matrixB.txt",
    "case1gb1.txt",
    "case1subcases.txt",
    "case1census.txt",
    "case2block.txt",
    "case3matrixB.txt",
    "case3gbs.txt",
    "case4block.txt",
    "case5smith.txt",
    "gb93.txt",
]

R = PolyRing(("a", "b", "c", "d", "e", "f"))


@pytest.mark.parametrize("name", ALL_FILES)
def test_every_file_has_a_label(name):
    assert tables.table_label(name)
    assert tables.table_lines(name)  # never empty


def test_monomial_listing_shapes():
    table = tables.monomial_table()
    assert {q: len(rows) for q, rows in table.items()} == {1: 3, 2: 6, 3: 10}
    for rows in table.values():
        assert [i for i, *_ in rows] == list(range(1, len(rows) + 1))
        for _, parens, rendered, collapsed in rows:
            OperatorMonomial.from_paren(parens)  # balanced and well-formed
            assert rendered.count("(") == rendered.count(")")
            if collapsed is not None:
                assert "L^" in collapsed


@pytest.mark.parametrize("name,count", [("basis32.txt", 20), ("basis33.txt", 50)])
def test_basis_listing_shapes(name, count):
    rows = tables.basis_table(name)
    assert [i for i, _, _ in rows] == list(range(1, count + 1))
    for _, parens, star in rows:
        m = OperatorMonomial.from_paren(parens)
        assert star.count("*") == m.degree
    listed = [parens for _, parens, _ in rows]
    assert listed == sorted(listed)


@pytest.mark.parametrize(
    "name,shape", [("conmat21.txt", (20, 20)), ("conmat22.txt", (50, 20))]
)
def test_letter_matrices_parse(name, shape):
    ring = PolyRing(("a", "b", "c")) if name.endswith("21.txt") else R
    m = tables.letter_matrix(name, ring)
    assert (m.nrows, m.ncols) == shape
    letters = set(ring.variables)
    for row in m.rows:
        for e in row:
            assert e.is_zero() or e.text() in letters
    # no blank row or column in a consequence matrix
    assert all(any(not e.is_zero() for e in row) for row in m.rows)
    cols = m.transpose()
    assert all(any(not e.is_zero() for e in row) for row in cols.rows)


@pytest.mark.parametrize(
    "name,shape,zero_rows",
    [("case1matrixB.txt", (34, 4), 1), ("case3matrixB.txt", (24, 4), 0)],
)
def test_block_matrices_parse(name, shape, zero_rows):
    m = tables.block_matrix(name, R)
    assert (m.nrows, m.ncols) == shape
    assert sum(1 for row in m.rows if all(e.is_zero() for e in row)) == zero_rows
    for row in m.rows:
        for e in row:
            assert isinstance(e, Polynomial)
            assert e.variables_present() <= {"b", "c", "d", "e", "f"}


def test_sectioned_tables_parse():
    for name, entries, gb, sols in [
        ("case1gb1.txt", 0, 5, 4),
        ("case2block.txt", 22, 8, 4),
        ("case4block.txt", 5, 3, 3),
    ]:
        data = tables.sectioned_table(name)
        assert len(data.get("entries", [])) == entries
        assert len(data["gb"]) == gb
        assert len(data["solutions"]) == sols
        for t in data.get("entries", []) + data["gb"]:
            R.parse(t, loose=True)  # parses under the loose grammar
        for pt in data["solutions"]:
            assert len(pt) == 6


def test_subcase_tables_parse():
    subs = tables.subcase_tables()
    assert [s["pin"] for s in subs] == [("b", "0"), ("e", "0"), ("d", "b")]
    assert [s["nonzero"] for s in subs] == [40, 55, 63]
    assert [len(s["solutions"]) for s in subs] == [5, 6, 6]
    # symbolic coordinates stay as text naming a coefficient variable
    flat = [c for s in subs for pt in s["solutions"] for c in pt]
    symbolic = {c for c in flat if isinstance(c, str)}
    assert symbolic and all(R.parse(c, loose=True) is not None for c in symbolic)


def test_ideal_tables_parse():
    ideals, solutions = tables.ideal_tables()
    assert sorted(ideals) == [1, 2, 3, 4]
    # the reference prints generator counts and degree spans for r >= 2 only
    assert {r: ideals[r]["generators"] for r in ideals} == {
        1: None,
        2: 102,
        3: 316,
        4: 643,
    }
    assert {r: ideals[r]["degrees"] for r in ideals if r > 1} == {
        2: (2, 5),
        3: (3, 7),
        4: (4, 8),
    }
    assert [len(ideals[r]["gb"]) for r in sorted(ideals)] == [3, 6, 10, 15]
    for r, spec in ideals.items():
        for t in spec["gb"]:
            R.parse(t, loose=True)
    assert len(solutions) == 1 and len(solutions[0]) == 6


def test_census_table_parses():
    census = tables.census_table()
    assert census["entries"] == (136, 47)
    assert sorted(census["minors"]) == [2, 3, 4]
    for size, spec in census["minors"].items():
        assert spec["raw"] > spec["distinct"] > 0
        lo, hi = spec["degrees"]
        assert 0 < lo <= hi <= 4 * size


def test_smith_table_parses():
    data = tables.smith_table()
    assert len(data["diagonal"]) == 20
    assert data["diagonal"].count("1") == 19 and data["diagonal"][-1] == "f"
    assert data["solutions"] == [(0, 0, 0, 0, 1, 0)]


def test_gb93_parses_and_is_integral():
    polys = tables.poly_list("gb93.txt", R)
    assert len(polys) == 93
    keys = {p.key() for p in polys}
    assert len(keys) == 93  # no duplicate lines
    for p in polys:
        assert not p.is_zero()
        assert p.rational_content().denominator == 1  # integer coefficients


def test_parse_point_mixed():
    pt = tables.parse_point(["1", "0", "-1/2", "d", "0", "-d-1"])
    assert pt[0] == Fraction(1) and pt[2] == Fraction(-1, 2)
    assert pt[3] == "d" and pt[5] == "-d-1"

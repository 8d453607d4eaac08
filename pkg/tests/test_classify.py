"""Classification-layer tests: matching, rendering, scans, the full driver."""

import json
from fractions import Fraction

import pytest

from opident import tables
from opident.classify import (
    DEFAULT_GRID,
    case_specs,
    classify,
    expected_table,
    genericity_scan,
    identity_name,
    identity_text,
    match_entry,
    mirror_vector,
    normalize_vector,
)


# -- tables and case split ----------------------------------------------------


def test_expected_tables():
    t21 = expected_table(2, 1)
    assert t21.max_rank == 17
    assert len(t21.entries) == 6
    assert all(e.rank == 14 for e in t21.entries)
    t22 = expected_table(2, 2)
    assert t22.max_rank == 20
    assert sum(1 for e in t22.entries if e.rank == 16) == 6
    assert sum(1 for e in t22.entries if e.rank == 19) == 14
    assert sum(1 for e in t22.entries if e.is_family) == 2
    assert expected_table(3, 2) is None


def test_case_specs_partition():
    specs = case_specs(2, 2)
    assert [s.index for s in specs] == [1, 2, 3, 4, 5, 6]
    assert specs[0].pinned == (("a", 1),)
    assert specs[0].free == ("b", "c", "d", "e", "f")
    assert specs[4].pinned == (("a", 0), ("b", 0), ("c", 0), ("d", 0), ("e", 1))
    assert specs[4].free == ("f",)
    assert specs[5].free == ()
    assert specs[1].label == "a = 0, b = 1"
    # every expected entry falls in exactly one case
    t = expected_table(2, 2)
    assert sum(len(t.in_case(i)) for i in range(1, 7)) == len(t.entries)


def test_normalize_vector():
    assert normalize_vector((0, 2, -4)) == (0, 1, -2)
    assert normalize_vector((Fraction(1, 2), 1, 0)) == (1, 2, 0)
    with pytest.raises(ValueError):
        normalize_vector((0, 0, 0))


# -- matching -------------------------------------------------------------------


def test_match_entry_points():
    t = expected_table(2, 2)
    e, val = match_entry(t, (0, 1, 0, 1, -1, 0))
    assert e.name == "Rota-Baxter" and val is None
    e, _ = match_entry(t, (0, 3, 0, 3, -3, 0))  # scale invariant
    assert e.name == "Rota-Baxter"
    assert match_entry(t, (1, 2, 3, 4, 5, 6)) is None
    assert match_entry(None, (1, 0, 0)) is None


def test_match_entry_families():
    t = expected_table(2, 2)
    e, val = match_entry(t, (1, 0, 0, 3, 0, -4))
    assert e.name == "New identity B (right)" and val == 3
    e, val = match_entry(t, (2, 0, 0, 6, 0, -8))
    assert e.name == "New identity B (right)" and val == 3
    e, val = match_entry(t, (1, Fraction(1, 2), Fraction(-3, 2), 0, 0, 0))
    assert e.name == "New identity B (left)" and val == Fraction(1, 2)
    # the excluded parameter value 0 lands on a rank-16 point instead
    e, val = match_entry(t, (1, 0, 0, 0, 0, -1))
    assert e.rank == 16 and val is None
    # nearby non-members stay unmatched
    assert match_entry(t, (1, 0, 0, 3, 0, 4)) is None


def test_identity_name():
    assert identity_name(2, 2, (0, 2, 0, 2, -2, 0)) == "Rota-Baxter"
    assert identity_name(2, 1, (1, -1, -1)) == "Derivation"
    assert identity_name(2, 2, (1, 1, 1, 1, 1, 1)) is None


# -- rendering ------------------------------------------------------------------


def test_identity_text_multiplicity1():
    assert identity_text(2, 1, (1, -1, -1)) == "L(xy) = L(x)y + xL(y)"
    assert identity_text(2, 1, (0, 1, 0)) == "L(x)y = 0"
    assert identity_text(2, 1, (1, 0, -1)) == "L(xy) = xL(y)"


def test_identity_text_multiplicity2():
    assert identity_text(2, 2, (0, 1, 0, 1, -1, 0)) == "L(L(x)y) + L(xL(y)) = L(x)L(y)"
    assert identity_text(2, 2, (1, 0, 0, 0, 0, 0)) == "L2(xy) = 0"
    assert (
        identity_text(2, 2, (1, 0, 0, 0, 0, 0), collapse=False) == "L(L(xy)) = 0"
    )
    # rational and symbolic coefficients get prefixes
    text = identity_text(2, 2, (1, -2, 1, -2, 2, 1))
    assert text == "L2(xy) + L2(x)y + 2L(x)L(y) + xL2(y) = 2L(L(x)y) + 2L(xL(y))"
    fam = identity_text(2, 2, (1, 0, 0, "d", 0, "-d-1"))
    assert "=" in fam and "d" in fam
    with pytest.raises(ValueError):
        identity_text(2, 1, (1, 0, 0, 0))


# -- mirror ---------------------------------------------------------------------


def test_mirror_vector_involution():
    for (p, q), n in [((2, 1), 3), ((2, 2), 6)]:
        vec = tuple(range(1, n + 1))
        assert mirror_vector(p, q, mirror_vector(p, q, vec)) == vec
    with pytest.raises(ValueError):
        mirror_vector(3, 2, (1,) * 20)


def test_mirror_known_pairs():
    # left average <-> right average; Rota-Baxter is symmetric
    assert mirror_vector(2, 2, (0, 1, 0, 0, -1, 0)) == (0, 0, 0, 1, -1, 0)
    assert mirror_vector(2, 2, (0, 1, 0, 1, -1, 0)) == (0, 1, 0, 1, -1, 0)
    assert mirror_vector(2, 1, (1, -1, 0)) == (1, 0, -1)


# -- genericity scans -------------------------------------------------------------


def test_scan_case5_is_exhaustive():
    scan = genericity_scan(2, 2, case_specs(2, 2)[4])
    assert scan.exhaustive and scan.sampled == len(DEFAULT_GRID)
    assert scan.passed
    assert scan.histogram == {19: 1, 20: len(DEFAULT_GRID) - 1}
    assert [name for _, _, name in scan.hits] == ["P_5"]


def test_scan_case6_single_point():
    scan = genericity_scan(2, 2, case_specs(2, 2)[5])
    assert scan.exhaustive and scan.sampled == 1
    assert scan.histogram == {16: 1}
    assert scan.passed


def test_scan_multiplicity1_case1():
    scan = genericity_scan(2, 1, case_specs(2, 1)[0])
    assert scan.exhaustive and scan.sampled == 49
    assert scan.histogram == {14: 4, 17: 45}
    assert scan.passed
    hit_points = {pt for pt, _, _ in scan.hits}
    assert hit_points == {
        (1, 0, 0),
        (1, 0, -1),
        (1, -1, 0),
        (1, -1, -1),
    }


def test_scan_budget_subsampling():
    scan = genericity_scan(2, 2, case_specs(2, 2)[0], budget=40, seed=3)
    assert not scan.exhaustive and scan.sampled == 40
    assert scan.passed
    again = genericity_scan(2, 2, case_specs(2, 2)[0], budget=40, seed=3)
    assert scan.histogram == again.histogram  # seeded, reproducible


# -- the driver -------------------------------------------------------------------


@pytest.fixture(scope="module")
def report21():
    return classify(2, 1)


@pytest.fixture(scope="module")
def report22():
    return classify(2, 2, budget=200, seed=1)


def test_classify_multiplicity1(report21):
    r = report21
    assert r.passed, r.findings
    assert r.orientation == "direct"
    assert len(r.cases) == 3
    assert r.observed_ranks == {14, 17}
    assert r.cases[0].identity_size == 14
    assert all(e.passed for e in r.entry_reports())
    assert all(ok for _, ok in r.mirror_checks)
    # every case scan was exhaustive: 49 + 7 + 1 grid points
    assert [c.scan.sampled for c in r.cases] == [49, 7, 1]
    assert all(c.scan.exhaustive for c in r.cases)


def test_classify_multiplicity2(report22):
    r = report22
    assert r.passed, r.findings
    assert r.orientation == "transposed"
    assert len(r.cases) == 6
    assert r.observed_ranks == {16, 19, 20}
    by_index = {c.spec.index: c for c in r.cases}
    assert by_index[1].identity_size == 16
    assert by_index[1].block_shape == (34, 4)
    assert by_index[2].identity_size == 19
    assert by_index[2].block_shape == (31, 1)
    assert by_index[2].distinct_entries == 22
    assert by_index[3].identity_size == 16
    assert by_index[3].nonzero_rows == 24
    assert by_index[4].distinct_entries == 5
    assert by_index[5].identity_size == 19
    assert by_index[6].identity_size == 16
    assert by_index[6].nonzero_rows == 0
    assert all(e.passed for e in r.entry_reports())
    assert all(ok for _, ok in r.remark_checks)
    assert all(ok for _, ok in r.mirror_checks)


def test_classify_entry_ideals_match_reference(report22, ring6):
    # elimination paths differ, so the residual blocks' entry lists need not
    # coincide with the transcribed ones entry by entry -- but the ideals
    # they generate must, and the reduced bases are canonical
    from opident.ideals import GroebnerBasis

    by_index = {c.spec.index: c for c in report22.cases}
    published = {
        1: tables.sectioned_table("case1gb1.txt")["gb"],
        2: tables.sectioned_table("case2block.txt")["gb"],
        4: tables.sectioned_table("case4block.txt")["gb"],
    }
    ideals3, _ = tables.ideal_tables("case3gbs.txt")
    published[3] = ideals3[1]["gb"]
    for idx, texts in published.items():
        want = GroebnerBasis(ring6, [ring6.parse(t, loose=True) for t in texts])
        assert by_index[idx].entry_basis == want, f"case {idx}"
    assert [g.text() for g in by_index[5].entry_basis] == ["f"]
    assert by_index[6].entry_basis is None  # zero block


def test_family_certificates(report22):
    fams = [e for e in report22.entry_reports() if e.entry.is_family]
    assert len(fams) == 2
    for er in fams:
        assert er.passed
        assert er.rank == 19 and er.rank_psf == 19
        # sixteen unit invariant factors plus three copies of the parameter
        consts = [t for t in er.smith_factors if t == "1"]
        assert len(consts) == 16
        assert sorted(er.smith_factors)[-3:] == [er.entry.parameter] * 3
        assert er.rank_at_excluded == 16


def test_report_serialization(report21):
    obj = report21.to_obj()
    json.dumps(obj)  # must be plain data
    assert obj["passed"] is True
    assert obj["degree"] == 2 and obj["multiplicity"] == 1
    text = report21.text()
    assert "case" in text.lower()
    md = report21.markdown()
    assert "|" in md


def test_exploratory_mode():
    # no table outside the validated regimes: scan histogram only
    r = classify(2, 1, expected=None, budget=20, seed=2, scan=True)
    assert r.max_rank is None
    assert r.passed  # nothing to contradict
    assert all(not c.entries for c in r.cases)
    assert all(c.scan is not None for c in r.cases)

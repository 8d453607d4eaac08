"""Case analyses and certification of the rank-stratification theorems.

The validated regimes are degree 2 with a single operator occurrence
(multiplicity 1) or a double occurrence (multiplicity 2).  The driver pins
leading coefficients case by case, runs the partial Smith form, studies the
residual block's determinantal ideals, certifies every classified low-rank
point (and one-parameter family) at its exact rank, and samples the
complement for genericity.  Other (degree, multiplicity) pairs run in
exploratory mode: same machinery, no expectations, no certification.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ._kernel import impl as _k
from .compose import OperatorPolynomial, comp_m_L
from .conmatrix import build_consequence_matrix, coefficient_ring
from .ideals import GroebnerBasis, buchberger, verify_zero_set
from .matrices import minor_census, partial_smith_form, rank_at, univariate_smith
from .monomials import enumerate_monomials
from .rings import Polynomial

DEFAULT_GRID = (
    Fraction(-2),
    Fraction(-1),
    Fraction(-1, 2),
    Fraction(0),
    Fraction(1, 2),
    Fraction(1),
    Fraction(2),
)


# ---------------------------------------------------------------------------
# expected classification tables


@dataclass(frozen=True)
class ExpectedEntry:
    """One classified identity: a coefficient point, or a one-parameter
    family when ``parameter`` is set (the parameter value 0 is excluded)."""

    vector: tuple
    rank: int
    name: str | None = None
    parameter: str | None = None

    @property
    def is_family(self):
        return self.parameter is not None

    @property
    def case_index(self):
        # first nonzero coordinate; family coordinates are nonzero by construction
        for i, c in enumerate(self.vector):
            if isinstance(c, str) or c != 0:
                return i + 1
        raise ValueError("zero vector in classification table")


@dataclass(frozen=True)
class ExpectedTable:
    degree: int
    multiplicity: int
    max_rank: int
    entries: tuple

    def in_case(self, index):
        return [e for e in self.entries if e.case_index == index]


# Degree 2, multiplicity 1: rank drops from 17 to 14 at exactly six points.
THEOREM_2_1 = ExpectedTable(
    degree=2,
    multiplicity=1,
    max_rank=17,
    entries=(
        ExpectedEntry((1, 0, 0), 14),
        ExpectedEntry((1, 0, -1), 14),
        ExpectedEntry((1, -1, 0), 14),
        ExpectedEntry((1, -1, -1), 14, name="Derivation"),
        ExpectedEntry((0, 1, 0), 14),
        ExpectedEntry((0, 0, 1), 14),
    ),
)

# Degree 2, multiplicity 2: rank 16 at the multiplicity-1 list with L
# replaced by L^2, rank 19 at twelve points plus two one-parameter families,
# rank 20 everywhere else.
THEOREM_2_2 = ExpectedTable(
    degree=2,
    multiplicity=2,
    max_rank=20,
    entries=(
        ExpectedEntry((1, 0, -1, 0, 0, -1), 16),
        ExpectedEntry((1, 0, -1, 0, 0, 0), 16),
        ExpectedEntry((1, 0, 0, 0, 0, -1), 16),
        ExpectedEntry((1, 0, 0, 0, 0, 0), 16),
        ExpectedEntry((0, 0, 1, 0, 0, 0), 16),
        ExpectedEntry((0, 0, 0, 0, 0, 1), 16),
        ExpectedEntry((1, 0, 0, 1, 0, 1), 19, name="New identity A (right)"),
        ExpectedEntry((1, 0, 0, "d", 0, "-d-1"), 19, name="New identity B (right)", parameter="d"),
        ExpectedEntry((1, 1, 1, 0, 0, 0), 19, name="New identity A (left)"),
        ExpectedEntry((1, "b", "-b-1", 0, 0, 0), 19, name="New identity B (left)", parameter="b"),
        ExpectedEntry((1, -2, 1, -2, 2, 1), 19, name="New identity C"),
        ExpectedEntry((1, -1, 0, -1, 1, 0), 19, name="Nijenhuis"),
        ExpectedEntry((0, 1, -1, 0, 0, 0), 19, name="P_1"),
        ExpectedEntry((0, 1, 0, 0, -1, 0), 19, name="Left average"),
        ExpectedEntry((0, 1, 0, 0, 0, 0), 19, name="P_2"),
        ExpectedEntry((0, 1, 0, 1, -1, 0), 19, name="Rota-Baxter"),
        ExpectedEntry((0, 0, 0, 1, -1, 0), 19, name="Right average"),
        ExpectedEntry((0, 0, 0, 1, 0, -1), 19, name="P_3"),
        ExpectedEntry((0, 0, 0, 1, 0, 0), 19, name="P_4"),
        ExpectedEntry((0, 0, 0, 0, 1, 0), 19, name="P_5"),
    ),
)

EXPECTED = {(2, 1): THEOREM_2_1, (2, 2): THEOREM_2_2}

# Coefficient permutation realizing the left/right mirror (opposite algebra):
# new[i] = old[perm[i]].  Swapping the operands of every product exchanges
# the "left" and "right" shapes and fixes the symmetric ones.
MIRROR = {(2, 1): (0, 2, 1), (2, 2): (0, 3, 5, 1, 4, 2)}

# Multiplicity-1 identities whose composition with L at one argument lands on
# a named multiplicity-2 identity: (source vector, argument, target name).
REMARK_PAIRS = (
    ((1, 0, -1), 1, "Left average"),
    ((1, -1, 0), 2, "Right average"),
    ((1, -1, 0), 1, "P_1"),
    ((1, 0, 0), 1, "P_2"),
    ((1, 0, -1), 2, "P_3"),
    ((1, 0, 0), 2, "P_4"),
    ((0, 1, 0), 2, "P_5"),
)


def expected_table(p, q):
    """The published classification table for (p, q), or None outside the
    validated regimes."""
    return EXPECTED.get((p, q))


# ---------------------------------------------------------------------------
# case stratification


@dataclass(frozen=True)
class CaseSpec:
    """Leading-coefficient normalization: the first index-1 coefficients are
    pinned to 0 and coefficient number index to 1 (scaling the identity so
    its first nonzero coefficient is 1).  The cases for a given (p, q) are
    mutually exclusive and exhaustive over nonzero coefficient vectors."""

    index: int
    pinned: tuple
    free: tuple

    @property
    def label(self):
        return ", ".join(f"{n} = {v}" for n, v in self.pinned)

    def assignment(self):
        return {n: Fraction(v) for n, v in self.pinned}


def case_specs(p, q):
    names = coefficient_ring(p, q).variables
    out = []
    for k in range(len(names)):
        pinned = tuple((names[i], 0) for i in range(k)) + ((names[k], 1),)
        out.append(CaseSpec(index=k + 1, pinned=pinned, free=tuple(names[k + 1 :])))
    return out


# ---------------------------------------------------------------------------
# vectors, matching, rendering


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected a rational coordinate, got {v!r}")


def normalize_vector(vector):
    """Scale a rational coefficient vector so its first nonzero entry is 1
    (the same normalization the case split uses)."""
    vec = [_as_fraction(v) for v in vector]
    for v in vec:
        if v:
            return tuple(x / v for x in vec)
    raise ValueError("the zero vector is not an identity")


def _entry_polys(entry, ring):
    # parse the (possibly symbolic) coordinates once per call site
    out = []
    for c in entry.vector:
        out.append(ring.parse(c) if isinstance(c, str) else ring.const(Fraction(c)))
    return out


def entry_assignment(entry, ring):
    """Map coefficient names to this entry's coordinates (family coordinates
    stay symbolic polynomials in the parameter)."""
    polys = _entry_polys(entry, ring)
    out = {}
    for name, poly in zip(ring.variables, polys):
        if entry.parameter is not None and poly.variables_present():
            out[name] = poly
        else:
            out[name] = poly.constant_value()
    return out


def match_entry(table, vector):
    """The classification entry matching `vector` up to a nonzero scalar,
    as (entry, parameter_value | None); None when the vector is unclassified.

    Family patterns match at any nonzero parameter value."""
    if table is None:
        return None
    nv = normalize_vector(vector)
    for e in table.entries:
        if e.is_family:
            continue
        if nv == tuple(_as_fraction(c) for c in e.vector):
            return (e, None)
    ring = coefficient_ring(table.degree, table.multiplicity)
    for e in table.entries:
        if not e.is_family:
            continue
        value = None
        for c, v in zip(e.vector, nv):
            if isinstance(c, str) and c == e.parameter:
                value = v
                break
        if not value:  # parameter 0 is excluded from every family
            continue
        polys = _entry_polys(e, ring)
        if all(p.evaluate({e.parameter: value}) == v for p, v in zip(polys, nv)):
            return (e, value)
    return None


def _coeff_prefix(c):
    # c is a positive-normalized Fraction or Polynomial
    if isinstance(c, Polynomial):
        if c.is_constant():
            return _coeff_prefix(c.constant_value())
        terms = c.terms
        if len(terms) == 1:
            (m, coef), = terms.items()
            exps = c.ring.unpack(m)
            if coef == 1 and sum(exps) == 1:
                return c.ring.variables[exps.index(1)]
        return f"({c.text()})"
    if c == 1:
        return ""
    if c.denominator != 1:
        return f"({c})"
    return str(c.numerator)


def _split_coeff(c, ring):
    """Normalize a vector coordinate to (is_zero, is_negative, positive form)."""
    if isinstance(c, str):
        c = ring.parse(c)
    if isinstance(c, Polynomial):
        if c.is_zero():
            return True, False, c
        if c.is_constant():
            v = c.constant_value()
            return False, v < 0, abs(v)
        neg = c.leading_coefficient() < 0
        return False, neg, -c if neg else c
    c = _as_fraction(c)
    return c == 0, c < 0, abs(c)


def identity_text(p, q, coefficients, *, collapse=True):
    """Render a coefficient vector over the degree-p multiplicity-q basis as
    an operator identity, positive combination on each side of the equals
    sign (negative terms move across)."""
    basis = enumerate_monomials(p, q)
    if len(coefficients) != len(basis):
        raise ValueError(f"expected {len(basis)} coefficients, got {len(coefficients)}")
    ring = coefficient_ring(p, q)
    left, right = [], []
    for c, m in zip(coefficients, basis):
        zero, neg, pos = _split_coeff(c, ring)
        if zero:
            continue
        (right if neg else left).append((pos, m))

    def side(terms):
        if not terms:
            return "0"
        return " + ".join(_coeff_prefix(c) + m.letters(collapse=collapse) for c, m in terms)

    return f"{side(left)} = {side(right)}"


def identity_name(p, q, coefficients):
    """Name of the classified identity matching the (rational) coefficient
    vector up to scale, or None."""
    m = match_entry(expected_table(p, q), coefficients)
    return m[0].name if m else None


def mirror_vector(p, q, vector):
    """Coefficient vector of the mirrored identity (operands of every product
    swapped); rank-preserving."""
    perm = MIRROR.get((p, q))
    if perm is None:
        raise ValueError(f"no mirror permutation recorded for {(p, q)}")
    return tuple(vector[i] for i in perm)


# ---------------------------------------------------------------------------
# report containers


@dataclass
class EntryReport:
    entry: ExpectedEntry
    rendered: str
    rank: int | None = None  # direct route on the full case matrix
    rank_psf: int | None = None  # identity_size + residual rank
    smith_factors: list | None = None  # families: invariant factor texts
    rank_at_excluded: int | None = None  # families: rank at parameter = 0
    passed: bool = False
    detail: str = ""

    def to_obj(self):
        return {
            "vector": [str(c) for c in self.entry.vector],
            "rank_expected": self.entry.rank,
            "name": self.entry.name,
            "parameter": self.entry.parameter,
            "identity": self.rendered,
            "rank": self.rank,
            "rank_psf": self.rank_psf,
            "smith_factors": self.smith_factors,
            "rank_at_excluded": self.rank_at_excluded,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class ScanReport:
    grid: tuple
    budget: int
    seed: int
    sampled: int = 0
    exhaustive: bool = False
    histogram: dict = field(default_factory=dict)  # rank -> count
    hits: list = field(default_factory=list)  # (point, rank, entry name)
    unexplained: list = field(default_factory=list)  # (point, rank)

    @property
    def passed(self):
        return not self.unexplained

    def to_obj(self):
        return {
            "grid": [str(g) for g in self.grid],
            "budget": self.budget,
            "seed": self.seed,
            "sampled": self.sampled,
            "exhaustive": self.exhaustive,
            "histogram": {str(r): n for r, n in sorted(self.histogram.items())},
            "hits": [
                {"point": [str(v) for v in pt], "rank": r, "name": name}
                for pt, r, name in self.hits
            ],
            "unexplained": [
                {"point": [str(v) for v in pt], "rank": r} for pt, r in self.unexplained
            ],
        }


@dataclass
class CaseReport:
    spec: CaseSpec
    identity_size: int = 0
    block_shape: tuple = (0, 0)
    nonzero_rows: int = 0
    distinct_entries: int = 0
    entry_basis: GroebnerBasis | None = None
    minor_bases: dict = field(default_factory=dict)  # size -> GroebnerBasis
    censuses: dict = field(default_factory=dict)  # size -> MinorCensus
    entries: list = field(default_factory=list)  # EntryReport
    zero_set_ok: bool = True
    scan: ScanReport | None = None

    def to_obj(self):
        return {
            "case": self.spec.index,
            "label": self.spec.label,
            "identity_size": self.identity_size,
            "block_shape": list(self.block_shape),
            "nonzero_rows": self.nonzero_rows,
            "distinct_entries": self.distinct_entries,
            "entry_basis": [g.text() for g in self.entry_basis] if self.entry_basis else None,
            "minor_bases": {
                str(s): [g.text() for g in gb] for s, gb in sorted(self.minor_bases.items())
            },
            "censuses": {
                str(s): {
                    "raw": c.raw_count,
                    "distinct": c.distinct_count,
                    "degree_min": c.degree_min,
                    "degree_max": c.degree_max,
                }
                for s, c in sorted(self.censuses.items())
            },
            "entries": [e.to_obj() for e in self.entries],
            "zero_set_ok": self.zero_set_ok,
            "scan": self.scan.to_obj() if self.scan else None,
        }


@dataclass
class ClassificationReport:
    degree: int
    multiplicity: int
    max_rank: int | None  # expected maximum; None in exploratory mode
    orientation: str  # "direct" | "transposed"
    cases: list = field(default_factory=list)
    remark_checks: list = field(default_factory=list)  # (description, ok)
    mirror_checks: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.findings

    @property
    def observed_ranks(self):
        seen = set()
        for c in self.cases:
            for e in c.entries:
                if e.rank is not None:
                    seen.add(e.rank)
            if c.scan:
                seen.update(c.scan.histogram)
        return seen

    def entry_reports(self):
        for c in self.cases:
            yield from c.entries

    def to_obj(self):
        return {
            "degree": self.degree,
            "multiplicity": self.multiplicity,
            "max_rank": self.max_rank,
            "orientation": self.orientation,
            "passed": self.passed,
            "observed_ranks": sorted(self.observed_ranks),
            "cases": [c.to_obj() for c in self.cases],
            "remark_checks": [{"check": d, "ok": ok} for d, ok in self.remark_checks],
            "mirror_checks": [{"check": d, "ok": ok} for d, ok in self.mirror_checks],
            "findings": self.findings,
            "notes": self.notes,
        }

    def text(self):
        lines = [
            f"classification report: degree {self.degree}, multiplicity {self.multiplicity}",
            f"orientation: {self.orientation}; expected max rank: {self.max_rank}",
        ]
        for c in self.cases:
            lines.append(
                f"case {c.spec.index} ({c.spec.label}): identity {c.identity_size}, "
                f"block {c.block_shape[0]}x{c.block_shape[1]}, "
                f"{c.nonzero_rows} nonzero rows, {c.distinct_entries} distinct entries"
            )
            for e in c.entries:
                badge = "ok" if e.passed else "FAIL"
                name = f" [{e.entry.name}]" if e.entry.name else ""
                lines.append(f"  rank {e.rank}: {e.rendered}{name} .. {badge}")
                if not e.passed:
                    lines.append(f"    {e.detail}")
            if c.scan:
                hist = ", ".join(f"{r}:{n}" for r, n in sorted(c.scan.histogram.items()))
                tag = "exhaustive" if c.scan.exhaustive else f"sampled {c.scan.sampled}"
                lines.append(f"  scan ({tag}) ranks {{{hist}}}; hits {len(c.scan.hits)}")
                for pt, r in c.scan.unexplained:
                    lines.append(f"    UNEXPLAINED rank {r} at {tuple(str(v) for v in pt)}")
        for d, ok in self.remark_checks:
            lines.append(f"remark: {d} .. {'ok' if ok else 'FAIL'}")
        for d, ok in self.mirror_checks:
            lines.append(f"mirror: {d} .. {'ok' if ok else 'FAIL'}")
        lines.append("PASSED" if self.passed else "FAILED")
        for f in self.findings:
            lines.append(f"finding: {f}")
        return "\n".join(lines)

    def markdown(self):
        rows = [
            f"# Classification report: degree {self.degree}, multiplicity {self.multiplicity}",
            "",
            f"- orientation: {self.orientation}",
            f"- expected maximal rank: {self.max_rank}",
            f"- verdict: {'**PASS**' if self.passed else '**FAIL**'}",
            "",
        ]
        for c in self.cases:
            rows.append(f"## Case {c.spec.index}: {c.spec.label}")
            rows.append("")
            rows.append(
                f"Identity block {c.identity_size}, residual "
                f"{c.block_shape[0]}x{c.block_shape[1]} with {c.nonzero_rows} nonzero rows "
                f"and {c.distinct_entries} distinct entries."
            )
            if c.entry_basis is not None:
                rows.append("")
                rows.append(
                    "Entry-ideal basis: "
                    + ", ".join(f"`{g.text()}`" for g in c.entry_basis)
                )
            if c.entries:
                rows.append("")
                rows.append("| rank | identity | name | check |")
                rows.append("|---|---|---|---|")
                for e in c.entries:
                    badge = "pass" if e.passed else "**FAIL**"
                    rows.append(
                        f"| {e.rank} | `{e.rendered}` | {e.entry.name or ''} | {badge} |"
                    )
            if c.scan:
                hist = ", ".join(f"{r}: {n}" for r, n in sorted(c.scan.histogram.items()))
                tag = "exhaustive grid" if c.scan.exhaustive else f"{c.scan.sampled} sampled points"
                rows.append("")
                rows.append(f"Genericity scan ({tag}): rank histogram {{{hist}}}, ")
                rows.append(
                    f"{len(c.scan.hits)} classified low-rank hits, "
                    f"{len(c.scan.unexplained)} unexplained."
                )
            rows.append("")
        if self.remark_checks or self.mirror_checks:
            rows.append("## Structural checks")
            rows.append("")
            for d, ok in self.remark_checks + self.mirror_checks:
                rows.append(f"- {'pass' if ok else '**FAIL**'}: {d}")
            rows.append("")
        if self.findings:
            rows.append("## Findings")
            rows.append("")
            for f in self.findings:
                rows.append(f"- {f}")
            rows.append("")
        for n in self.notes:
            rows.append(f"> {n}")
        return "\n".join(rows)


# ---------------------------------------------------------------------------
# scanning


def _linear_template(matrix, names):
    """Per-entry integer linear forms ((var_index, coeff), ...) when every
    entry is homogeneous linear with integer coefficients — consequence
    matrices always are — else None.  Lets the scan evaluate thousands of
    points as integer dot products instead of polynomial substitutions."""
    ring = matrix.ring
    index = {n: i for i, n in enumerate(names)}
    template = []
    for row in matrix.rows:
        out = []
        for e in row:
            lin = []
            for m, c in e.terms.items():
                if isinstance(c, Fraction):
                    return None
                exps = ring.unpack(m)
                if sum(exps) != 1:
                    return None
                lin.append((index[ring.variables[exps.index(1)]], c))
            out.append(tuple(lin))
        template.append(out)
    return template


def _rank_template(template, ncols, ivec):
    rows = [
        [sum(c * ivec[i] for i, c in lin) for lin in row]
        for row in template
    ]
    bound = min(len(rows), ncols)
    if bound and _k.rank_mod(rows, ncols) == bound:
        return bound
    return _k.rank_int(rows, ncols)


def _sample_points(free, grid, budget, seed):
    total = len(grid) ** len(free)
    if total <= budget:
        return list(itertools.product(grid, repeat=len(free))), True
    rng = random.Random(seed)
    seen = set()
    # distinct tuples; the space is far larger than any sane budget
    attempts = 0
    while len(seen) < budget and attempts < 64 * budget:
        seen.add(tuple(rng.choice(grid) for _ in free))
        attempts += 1
    return sorted(seen), False


def _scan_case(matrix, names, case, table, grid, budget, seed):
    report = ScanReport(grid=tuple(grid), budget=budget, seed=seed)
    points, report.exhaustive = _sample_points(case.free, grid, budget, seed)
    base = case.assignment()
    max_rank = table.max_rank if table else None
    template = _linear_template(matrix, names)
    for pt in points:
        assignment = dict(base)
        assignment.update(zip(case.free, pt))
        if template is not None:
            vec = [assignment[n] for n in names]
            den = 1
            for v in vec:
                den = den * v.denominator // gcd(den, v.denominator)
            rank = _rank_template(template, matrix.ncols, [int(v * den) for v in vec])
        else:
            rank = rank_at(matrix, assignment)
        report.sampled += 1
        report.histogram[rank] = report.histogram.get(rank, 0) + 1
        if table is None or rank == max_rank:
            continue
        vector = tuple(assignment[n] for n in names)
        found = match_entry(table, vector)
        if found and found[0].rank == rank:
            report.hits.append((vector, rank, found[0].name))
        else:
            report.unexplained.append((vector, rank))
    return report


def genericity_scan(p, q, case, *, grid=DEFAULT_GRID, budget=3000, seed=0, expected="auto"):
    """Rank every grid point of a case (subsampled beyond `budget`) and
    compare against the classification table: off-table points must attain
    the maximal rank; anything else is reported as unexplained, never
    suppressed."""
    table = expected_table(p, q) if expected == "auto" else expected
    matrix = _analysis_matrix(p, q)[0]
    names = coefficient_ring(p, q).variables
    return _scan_case(matrix, names, case, table, grid, budget, seed)


# ---------------------------------------------------------------------------
# certification helpers


def _pure_parameter_power(poly, parameter):
    if len(poly.terms) != 1:
        return False
    (m, c), = poly.terms.items()
    if c != 1:
        return False
    exps = poly.ring.unpack(m)
    idx = poly.ring._index[parameter]
    return all(e == 0 for i, e in enumerate(exps) if i != idx)


def _certify_point(matrix, block, identity_size, entry, ring, report):
    assignment = entry_assignment(entry, ring)
    report.rank = rank_at(matrix, assignment)
    report.rank_psf = identity_size + rank_at(block, assignment)
    ok = report.rank == entry.rank == report.rank_psf
    if not ok:
        report.detail = (
            f"expected rank {entry.rank}, direct {report.rank}, "
            f"identity+residual {report.rank_psf} at {tuple(str(v) for v in entry.vector)}"
        )
    return ok


def _certify_family(matrix, block, identity_size, entry, ring, report):
    parameter = entry.parameter
    assignment = entry_assignment(entry, ring)
    symbolic = {n: v for n, v in assignment.items() if n != parameter}
    fam = matrix.substitute(symbolic)
    factors = univariate_smith(fam, parameter)
    report.smith_factors = [f.text() for f in factors]
    generic = len(factors)
    # the invariant factors certify the rank at every parameter value at once:
    # each nonconstant factor must vanish only at the excluded value 0
    pure = all(f.is_constant() or _pure_parameter_power(f, parameter) for f in factors)
    report.rank_at_excluded = sum(1 for f in factors if f.evaluate({parameter: 0}) != 0)
    blk = block.substitute({n: v for n, v in symbolic.items() if n in ring.variables})
    blk_factors = univariate_smith(blk, parameter)
    report.rank_psf = identity_size + len(blk_factors)
    report.rank = generic
    ok = generic == entry.rank == report.rank_psf and pure
    if not ok:
        report.detail = (
            f"family over {parameter}: invariant factors {report.smith_factors}, "
            f"expected generic rank {entry.rank}, psf route {report.rank_psf}"
            + ("" if pure else "; a factor vanishes away from the excluded value")
        )
    return ok


def _check_remarks(table):
    """Compose each recorded multiplicity-1 identity with L at one argument
    and confirm it lands on the named multiplicity-2 identity."""
    ring = coefficient_ring(2, 2)
    basis21 = enumerate_monomials(2, 1)
    basis22 = enumerate_monomials(2, 2)
    by_name = {e.name: e for e in table.entries if e.name}
    out = []
    for vec, arg, name in REMARK_PAIRS:
        coeffs = {}
        for c, m in zip(vec, basis21):
            if c:
                coeffs[m] = ring.const(Fraction(c))
        image = OperatorPolynomial(ring, coeffs).apply(lambda m: comp_m_L(m, arg))
        got = {m: poly.constant_value() for m, poly in image.items()}
        vector = tuple(got.get(m, Fraction(0)) for m in basis22)
        target = by_name[name]
        ok = normalize_vector(vector) == normalize_vector(
            tuple(_as_fraction(c) for c in target.vector)
        )
        desc = (
            f"{identity_text(2, 1, vec)} composed with L at argument {arg} "
            f"gives {name}"
        )
        out.append((desc, ok))
    return out


def _check_mirror(matrix, names, table, seed=0):
    """The mirror permutation must carry every classified entry to a
    classified entry of the same rank, and preserve the rank of sampled
    points."""
    p, q = table.degree, table.multiplicity
    perm = MIRROR[(p, q)]
    out = []
    for e in table.entries:
        if e.is_family:
            # structural: the mirrored pattern is the other family (or itself)
            mirrored = tuple(str(e.vector[i]) for i in perm)
            shapes = {
                tuple(str(c).replace(x.parameter, "t") for c in x.vector): x.name
                for x in table.entries
                if x.is_family
            }
            name = shapes.get(tuple(c.replace(e.parameter, "t") for c in mirrored))
            out.append((f"mirror of family {e.name} is family {name}", name is not None))
            continue
        vec = tuple(_as_fraction(c) for c in e.vector)
        mirrored = mirror_vector(p, q, vec)
        rank = rank_at(matrix, dict(zip(names, mirrored)))
        found = match_entry(table, mirrored)
        ok = rank == e.rank and found is not None and found[0].rank == e.rank
        label = e.name or identity_text(p, q, vec)
        out.append((f"mirror of {label} has rank {e.rank} and is classified", ok))
    rng = random.Random(seed)
    agree = True
    for _ in range(12):
        pt = tuple(Fraction(rng.randint(-4, 4)) for _ in names)
        if not any(pt):
            continue
        r1 = rank_at(matrix, dict(zip(names, pt)))
        r2 = rank_at(matrix, dict(zip(names, mirror_vector(p, q, pt))))
        if r1 != r2:
            agree = False
            break
    out.append(("mirror preserves rank on sampled points", agree))
    return out


# ---------------------------------------------------------------------------
# driver


def _analysis_matrix(p, q):
    """Consequence matrix in analysis orientation: transposed when there are
    more basis columns than consequence rows, so elimination runs on the tall
    side and residual blocks match the published shapes."""
    cm = build_consequence_matrix(p, q)
    m = cm.matrix
    if m.ncols > m.nrows:
        return m.transpose(), "transposed"
    return m, "direct"


def classify(
    p,
    q,
    *,
    expected="auto",
    minor_sizes=None,
    scan=True,
    grid=DEFAULT_GRID,
    budget=3000,
    seed=0,
):
    """Run the complete case analysis for degree p, multiplicity q.

    For each leading-coefficient case: pin, eliminate (partial Smith form),
    collect the residual block's distinct entries and their ideal basis,
    optionally census deeper minors (`minor_sizes`, a mapping case index ->
    sizes), certify every classified entry of the case at its exact rank
    (families by univariate invariant factors over the parameter), verify the
    identity-rank points annihilate the residual entries, and scan the case
    grid for genericity.  Any failed check lands in report.findings with the
    offending point or polynomial; passed == no findings.

    Outside the validated (2,1)/(2,2) tables, pass expected=None for an
    exploratory run (no certification, scan histogram only).
    """
    table = expected_table(p, q) if expected == "auto" else expected
    matrix, orientation = _analysis_matrix(p, q)
    ring = coefficient_ring(p, q)
    names = ring.variables
    report = ClassificationReport(
        degree=p,
        multiplicity=q,
        max_rank=table.max_rank if table else None,
        orientation=orientation,
    )
    report.notes.append(
        "entry and minor ideal bases are recomputed here; equality with the "
        "published bases and solution tables is exercised by the test suite"
    )
    sizes_for = dict(minor_sizes or {})

    for case in case_specs(p, q):
        cr = CaseReport(spec=case)
        pinned = matrix.substitute(case.assignment())
        psf = partial_smith_form(pinned)
        if not psf.verify(pinned):
            report.findings.append(f"case {case.index}: unimodular replay failed")
        cr.identity_size = psf.identity_size
        block = psf.block
        cr.block_shape = (block.nrows, block.ncols)
        zero = ring.zero()
        cr.nonzero_rows = sum(1 for row in block.rows if any(e != zero for e in row))

        census1 = minor_census(block, 1)
        cr.censuses[1] = census1
        cr.distinct_entries = census1.distinct_count
        gens = census1.distinct
        if gens:
            cr.entry_basis = buchberger(gens, ring=ring)
        for size in sizes_for.get(case.index, ()):
            if size == 1 or size > min(block.nrows, block.ncols):
                continue
            c = minor_census(block, size)
            cr.censuses[size] = c
            if c.distinct:
                cr.minor_bases[size] = buchberger(c.distinct, ring=ring)

        for entry in table.in_case(case.index) if table else ():
            er = EntryReport(entry=entry, rendered=identity_text(p, q, entry.vector))
            if entry.is_family:
                er.passed = _certify_family(pinned, block, cr.identity_size, entry, ring, er)
            else:
                er.passed = _certify_point(pinned, block, cr.identity_size, entry, ring, er)
                if er.passed and entry.rank == cr.identity_size and gens:
                    # identity-rank points must kill every residual entry
                    [(pt, ok, failures)] = verify_zero_set(
                        gens, [entry_assignment(entry, ring)]
                    )
                    if not ok:
                        er.passed = False
                        cr.zero_set_ok = False
                        er.detail = (
                            f"residual entries {failures} do not vanish at "
                            f"{tuple(str(v) for v in entry.vector)}"
                        )
            if not er.passed:
                report.findings.append(f"case {case.index}: {er.detail}")
            cr.entries.append(er)

        if scan:
            cr.scan = _scan_case(matrix, names, case, table, grid, budget, seed)
            if cr.scan.unexplained:
                for pt, r in cr.scan.unexplained:
                    report.findings.append(
                        f"case {case.index}: unexplained rank {r} at "
                        f"{tuple(str(v) for v in pt)}"
                    )
        report.cases.append(cr)

    if table and (p, q) == (2, 2):
        report.remark_checks = _check_remarks(table)
        for desc, ok in report.remark_checks:
            if not ok:
                report.findings.append(f"remark check failed: {desc}")
    if table and (p, q) in MIRROR:
        report.mirror_checks = _check_mirror(matrix, names, table, seed=seed)
        for desc, ok in report.mirror_checks:
            if not ok:
                report.findings.append(f"mirror check failed: {desc}")
    return report

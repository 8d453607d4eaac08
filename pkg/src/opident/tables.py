"""Bundled reference tables and their parsers.

The package ships transcriptions of the published tables it is checked
against: monomial bases, consequence matrices, residual blocks of partial
Smith forms, Groebner bases, minor censuses, and solution sets.  The files
live in data/ and each carries a ``# table: <label>`` header naming the
table it transcribes.  Zero entries are written as a dot; inside block
matrices adjacency means product and columns are separated by ``|``.
"""

from fractions import Fraction
from importlib import resources

from .matrices import PolyMatrix

__all__ = [
    "table_label",
    "table_lines",
    "monomial_table",
    "basis_table",
    "letter_matrix",
    "block_matrix",
    "poly_list",
    "sectioned_table",
    "subcase_tables",
    "ideal_tables",
    "census_table",
    "smith_table",
    "parse_point",
]


def _read(name):
    return resources.files("opident").joinpath("data", name).read_text(encoding="utf-8")


def table_label(name):
    """The label from the file's '# table:' provenance header."""
    for line in _read(name).splitlines():
        if line.startswith("# table:"):
            return line.split(":", 1)[1].strip()
    raise ValueError(f"{name} has no table header")


def table_lines(name):
    """Non-comment, non-blank lines of a data file."""
    out = []
    for line in _read(name).splitlines():
        line = line.rstrip()
        if not line or line.lstrip().startswith("#"):
            continue
        out.append(line)
    return out


def monomial_table(name="p2q123.txt"):
    """Indexed monomial listing grouped by multiplicity.

    Returns {q: [(index, parens, rendered, collapsed-or-None), ...]}.
    """
    table = {}
    current = None
    for line in table_lines(name):
        if line.startswith("q="):
            current = int(line[2:])
            table[current] = []
            continue
        idx, parens, rest = line.split(None, 2)
        if "=" in rest:
            rendered, collapsed = (s.strip() for s in rest.split("=", 1))
        else:
            rendered, collapsed = rest.strip(), None
        table[current].append((int(idx), parens, rendered, collapsed))
    return table


def basis_table(name):
    """Indexed basis listing: [(index, parens, star form), ...]."""
    rows = []
    for line in table_lines(name):
        idx, parens, star = line.split()
        rows.append((int(idx), parens, star))
    return rows


def letter_matrix(name, ring):
    """Matrix whose entries are single coefficient letters or dots."""
    rows = [line.split() for line in table_lines(name)]
    return PolyMatrix.from_texts(ring, rows)


def block_matrix(name, ring):
    """Matrix with '|'-separated polynomial entries in loose spelling."""
    rows = []
    for line in table_lines(name):
        rows.append([cell.strip() for cell in line.split("|")])
    return PolyMatrix.from_texts(ring, rows, loose=True)


def poly_list(name, ring):
    """One loose-spelled polynomial per line (e.g. a Groebner basis)."""
    return [ring.parse(line, loose=True) for line in table_lines(name)]


def parse_point(tokens):
    """Solution row -> tuple of Fraction, with symbolic coordinates kept
    as strings (free parameters such as 'd' or '-d-1')."""
    point = []
    for tok in tokens:
        try:
            point.append(Fraction(tok))
        except ValueError:
            point.append(tok)
    return tuple(point)


_SECTION_KEYS = ("entries", "gb", "solutions")


def sectioned_table(name):
    """File of 'entries' / 'gb' / 'solutions' sections.

    Returns {"entries": [text, ...], "gb": [text, ...],
    "solutions": [point, ...]} with absent sections omitted.
    """
    out = {}
    current = None
    for line in table_lines(name):
        if line in _SECTION_KEYS:
            current = line
            out[current] = []
            continue
        if current is None:
            raise ValueError(f"{name}: data before any section header")
        if current == "solutions":
            out[current].append(parse_point(line.split()))
        else:
            out[current].append(line)
    return out


def subcase_tables(name="case1subcases.txt"):
    """Subcase solution file -> [{"pin": (var, value-text), "nonzero": n,
    "solutions": [point, ...]}, ...]."""
    cases = []
    for line in table_lines(name):
        if line.startswith("subcase "):
            var, _, val = line.split()[1].partition("=")
            cases.append({"pin": (var, val), "nonzero": None, "solutions": []})
        elif line.startswith("nonzero "):
            cases[-1]["nonzero"] = int(line.split()[1])
        else:
            cases[-1]["solutions"].append(parse_point(line.split()))
    return cases


def ideal_tables(name="case3gbs.txt"):
    """Determinantal-ideal file -> ({size: {"generators": n-or-None,
    "degrees": (lo, hi)-or-None, "gb": [text, ...]}}, solutions)."""
    ideals = {}
    solutions = []
    current = None
    in_solutions = False
    for line in table_lines(name):
        if line.startswith("ideal r="):
            current = ideals[int(line.split("=")[1])] = {
                "generators": None,
                "degrees": None,
                "gb": [],
            }
            in_solutions = False
        elif line.startswith("generators "):
            _, n, _, lo, hi = line.split()
            current["generators"] = int(n)
            current["degrees"] = (int(lo), int(hi))
        elif line == "gb":
            continue
        elif line == "solutions":
            in_solutions = True
        elif in_solutions:
            solutions.append(parse_point(line.split()))
        else:
            current["gb"].append(line)
    return ideals, solutions


def census_table(name="case1census.txt"):
    """Published minor-census counts -> {"entries": (raw, distinct),
    "minors": {size: {"raw": n, "distinct": n, "degrees": (lo, hi),
    "gb_size": n}}}."""
    out = {"entries": None, "minors": {}}
    for line in table_lines(name):
        toks = line.split()
        if toks[0] == "entries":
            out["entries"] = (int(toks[2]), int(toks[4]))
        elif toks[0] == "minors":
            out["minors"][int(toks[1])] = {
                "raw": int(toks[3]),
                "distinct": int(toks[5]),
                "degrees": (int(toks[7]), int(toks[8])),
                "gb_size": int(toks[10]),
            }
    return out


def smith_table(name="case5smith.txt"):
    """Univariate Smith-form file -> {"diagonal": [text, ...] with 'NxK'
    run-length spelled out, "solutions": [point, ...]}."""
    diagonal = []
    solutions = []
    in_solutions = False
    for line in table_lines(name):
        if line.startswith("diagonal"):
            for tok in line.split()[1:]:
                if "x" in tok and tok[0].isdigit():
                    val, _, count = tok.partition("x")
                    diagonal.extend([val] * int(count))
                else:
                    diagonal.append(tok)
        elif line == "solutions":
            in_solutions = True
        elif in_solutions:
            solutions.append(parse_point(line.split()))
    return {"diagonal": diagonal, "solutions": solutions}

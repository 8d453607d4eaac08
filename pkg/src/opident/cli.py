"""Command-line surface: enumeration, consequence matrices, elimination,
determinantal ideals, reduced bases, rank queries, and the classification
driver.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Output on
stdout is deterministic for a given invocation (timings and warnings go to
stderr, cached artifacts are served byte-identically).
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .cache import cache_load, cache_store, gb_key
from .classify import (
    DEFAULT_GRID,
    _analysis_matrix,
    case_specs,
    genericity_scan,
)
from .classify import classify as _run_classify
from .compose import consequences as _consequences
from .conmatrix import build_consequence_matrix, coefficient_ring, generic_operator
from .ideals import GroebnerBasis, buchberger
from .matrices import PolyMatrix, minor_census, partial_smith_form, rank_at
from .monomials import enumerate_monomials
from .rings import PolyRing


def _fail(message):
    click.echo(f"FAIL: {message}", err=True)
    raise SystemExit(1)


def _parse_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"not a rational: {text!r}") from exc


def _parse_point(text):
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise click.BadParameter(f"expected name=value, got {part!r}")
        name, _, value = part.partition("=")
        out[name.strip()] = _parse_rational(value.strip())
    if not out:
        raise click.BadParameter("empty point")
    return out


def _parse_grid(text):
    values = tuple(_parse_rational(v) for v in text.split(",") if v.strip())
    if not values:
        raise click.BadParameter("empty grid")
    return values


def _case_of(p, q, index):
    specs = case_specs(p, q)
    if not 1 <= index <= len(specs):
        raise click.BadParameter(f"case must be 1..{len(specs)} for degree {p} mult {q}")
    return specs[index - 1]


def _case_block(p, q, index):
    case = _case_of(p, q, index)
    matrix, _ = _analysis_matrix(p, q)
    pinned = matrix.substitute(case.assignment())
    psf = partial_smith_form(pinned)
    return case, pinned, psf


@click.group()
@click.version_option(version=__version__, prog_name="opident")
def main():
    """Exact classification toolkit for linear-operator identities."""


@main.command("enumerate")
@click.option("--degree", "-p", type=int, required=True, help="number of arguments")
@click.option("--mult", "-q", type=int, required=True, help="operator occurrences")
@click.option(
    "--style",
    type=click.Choice(["letters", "star", "paren"]),
    default="letters",
    show_default=True,
)
@click.option("--collapse/--no-collapse", default=True, show_default=True,
              help="write operator towers as powers")
@click.option("--index", "show_index", is_flag=True, help="prefix each line with its position")
def cmd_enumerate(degree, mult, style, collapse, show_index):
    """List the operator monomial basis in order."""
    if degree < 1 or mult < 0:
        raise click.BadParameter("need degree >= 1 and mult >= 0")
    for i, m in enumerate(enumerate_monomials(degree, mult), start=1):
        text = m.render(style, collapse)
        click.echo(f"{i}: {text}" if show_index else text)


@main.command("consequences")
@click.option("--degree", "-p", type=int, required=True)
@click.option("--mult", "-q", type=int, required=True)
@click.option("--all", "show_all", is_flag=True, help="include duplicate rows")
@click.option("--json", "as_json", is_flag=True)
def cmd_consequences(degree, mult, show_all, as_json):
    """Derive the one-step consequences of the generic identity."""
    R = generic_operator(degree, mult)
    rows = _consequences(R)
    if not show_all:
        rows = [c for c in rows if c.duplicate_of is None]
    if as_json:
        obj = [
            {
                "word": c.word,
                "duplicate_of": c.duplicate_of,
                "expansion": c.opoly.render("letters", collapse=True),
            }
            for c in rows
        ]
        click.echo(json.dumps(obj, indent=2, ensure_ascii=False))
        return
    for c in rows:
        dup = f"  [= row {c.duplicate_of + 1}]" if c.duplicate_of is not None else ""
        click.echo(f"{c.word}: {c.opoly.render('letters', collapse=True)}{dup}")


@main.command("matrix")
@click.option("--degree", "-p", type=int, required=True)
@click.option("--mult", "-q", type=int, required=True)
@click.option("--transpose", is_flag=True, help="emit the transposed matrix")
@click.option("--json", "as_json", is_flag=True)
def cmd_matrix(degree, mult, transpose, as_json):
    """Print the consequence matrix (rows = consequences, columns = basis)."""
    cm = build_consequence_matrix(degree, mult)
    m = cm.matrix.transpose() if transpose else cm.matrix
    if as_json:
        click.echo(m.to_json())
    else:
        click.echo(m.text())


@main.command("psf")
@click.option("--degree", "-p", type=int, required=True)
@click.option("--mult", "-q", type=int, required=True)
@click.option("--case", "case_index", type=int, required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_psf(degree, mult, case_index, as_json):
    """Eliminate a leading-coefficient case to [[I,0],[0,B]] and show B."""
    case, pinned, psf = _case_block(degree, mult, case_index)
    if not psf.verify(pinned):
        _fail("unimodular replay does not reproduce the partial Smith form")
    zero = pinned.ring.zero()
    nonzero = sum(1 for row in psf.block.rows if any(e != zero for e in row))
    if as_json:
        obj = {
            "case": case_index,
            "pinned": {n: str(v) for n, v in case.pinned},
            "identity_size": psf.identity_size,
            "block": psf.block.to_obj(),
            "nonzero_rows": nonzero,
            "row_ops": len(psf.row_ops),
            "col_ops": len(psf.col_ops),
        }
        click.echo(json.dumps(obj, indent=2))
        return
    click.echo(f"case {case_index}: {case.label}")
    click.echo(f"identity_size: {psf.identity_size}")
    click.echo(
        f"block: {psf.block.nrows}x{psf.block.ncols} ({nonzero} nonzero rows)"
    )
    click.echo(psf.block.text())


@main.command("minors")
@click.option("--degree", "-p", type=int, required=True)
@click.option("--mult", "-q", type=int, required=True)
@click.option("--case", "case_index", type=int, required=True)
@click.option("--size", "-r", type=int, required=True)
@click.option("--list", "list_them", is_flag=True, help="print the distinct minors")
@click.option("--json", "as_json", is_flag=True)
def cmd_minors(degree, mult, case_index, size, list_them, as_json):
    """Census the size-r minors of a case's residual block."""
    _, _, psf = _case_block(degree, mult, case_index)
    if size < 1 or size > min(psf.block.nrows, psf.block.ncols):
        raise click.BadParameter("size out of range for the residual block")
    census = minor_census(psf.block, size)
    if as_json:
        obj = {
            "size": census.size,
            "raw": census.raw_count,
            "distinct": census.distinct_count,
            "degree_min": census.degree_min,
            "degree_max": census.degree_max,
        }
        if list_them:
            obj["minors"] = [m.text() for m in census.distinct]
        click.echo(json.dumps(obj, indent=2))
        return
    click.echo(
        f"size {census.size}: raw {census.raw_count}, distinct {census.distinct_count}, "
        f"degrees {census.degree_min}..{census.degree_max}"
    )
    if list_them:
        for m in census.distinct:
            click.echo(m.text())


def _load_generators(gens_file):
    obj = json.loads(Path(gens_file).read_text(encoding="utf-8"))
    try:
        ring = PolyRing(obj["variables"])
        gens = [ring.parse(t) for t in obj["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise click.BadParameter(f"bad generators file: {exc}") from exc
    return ring, gens


@main.command("gb")
@click.option("--degree", "-p", type=int)
@click.option("--mult", "-q", type=int)
@click.option("--case", "case_index", type=int)
@click.option("--minor-size", "-r", type=int, default=1, show_default=True,
              help="generate from this minor size of the case block")
@click.option("--gens-file", type=click.Path(exists=True, dir_okay=False),
              help='JSON {"variables": [...], "generators": [...]} instead of a case')
@click.option("--cache/--no-cache", "use_cache", default=True, show_default=True)
@click.option("--json-out", type=click.Path(dir_okay=False), help="also write the artifact here")
@click.option("--stats", is_flag=True, help="print run statistics to stderr")
def cmd_gb(degree, mult, case_index, minor_size, gens_file, use_cache, json_out, stats):
    """Reduced basis of a determinantal ideal (or explicit generators)."""
    if gens_file:
        ring, gens = _load_generators(gens_file)
    elif degree is not None and mult is not None and case_index is not None:
        _, _, psf = _case_block(degree, mult, case_index)
        census = minor_census(psf.block, minor_size)
        ring, gens = psf.block.ring, census.distinct
    else:
        raise click.UsageError("need either --gens-file or --degree/--mult/--case")
    gens = [g for g in gens if g]
    if not gens:
        _fail("no nonzero generators to reduce")

    key = gb_key(ring, gens)
    artifact = cache_load(key) if use_cache else None
    if artifact is None:
        gb = buchberger(gens, ring=ring, collect_stats=stats)
        artifact = gb.to_obj()
        if use_cache:
            cache_store(key, artifact)
        if stats and gb.stats is not None:
            s = gb.stats
            click.echo(
                f"generators {s.generators} -> {s.after_preprocess} preprocessed; "
                f"pairs {s.pairs_considered} (coprime {s.pairs_pruned_coprime}, "
                f"chain {s.pairs_pruned_chain}); zero reductions {s.reductions_to_zero}; "
                f"basis {s.basis_growth}; {s.elapsed:.2f}s",
                err=True,
            )
    if json_out:
        Path(json_out).write_text(json.dumps(artifact, sort_keys=True), encoding="utf-8")
    for text in artifact["basis"]:
        click.echo(text)


@main.command("rank-at")
@click.option("--degree", "-p", type=int, required=True)
@click.option("--mult", "-q", type=int, required=True)
@click.option("--point", required=True, help="comma-separated name=value assignments")
@click.option("--free", help="leave this coefficient symbolic")
def cmd_rank_at(degree, mult, point, free):
    """Exact rank of the consequence matrix at a coefficient point."""
    matrix, _ = _analysis_matrix(degree, mult)
    ring = coefficient_ring(degree, mult)
    assignment = _parse_point(point)
    unknown = set(assignment) - set(ring.variables)
    if unknown:
        raise click.BadParameter(f"unknown coefficients: {sorted(unknown)}")
    if free is None:
        missing = set(ring.variables) - set(assignment)
        if missing:
            raise click.BadParameter(f"missing coefficients: {sorted(missing)}")
        click.echo(str(rank_at(matrix, assignment)))
        return
    if free not in ring.variables:
        raise click.BadParameter(f"unknown free coefficient: {free}")
    assignment.pop(free, None)
    missing = set(ring.variables) - set(assignment) - {free}
    if missing:
        raise click.BadParameter(f"missing coefficients: {sorted(missing)}")
    result = rank_at(matrix, assignment, free=free)
    pivots = ", ".join(p.text() for p in result.exceptional) or "none"
    click.echo(f"generic rank {result.generic_rank}; exceptional pivots: {pivots}")


def _parse_minor_sizes(text):
    # "1:1,2;3:1,2,3,4" -> {1: (1, 2), 3: (1, 2, 3, 4)}
    out = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        case_part, _, sizes_part = chunk.partition(":")
        try:
            out[int(case_part)] = tuple(int(s) for s in sizes_part.split(",") if s)
        except ValueError as exc:
            raise click.BadParameter(f"bad minor-sizes spec {chunk!r}") from exc
    return out


@main.command("classify")
@click.option("--degree", "-p", type=int, required=True)
@click.option("--mult", "-q", type=int, required=True)
@click.option("--scan-grid", help="comma-separated rationals for the genericity grid")
@click.option("--budget", type=int, default=3000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--scan/--no-scan", default=True, show_default=True)
@click.option("--minor-sizes", help='per-case census sizes, e.g. "3:2,3,4"')
@click.option("--report", "report_path", type=click.Path(dir_okay=False),
              help="write a .json or .md report here")
def cmd_classify(degree, mult, scan_grid, budget, seed, scan, minor_sizes, report_path):
    """Run the full case analysis and certify the classification."""
    grid = _parse_grid(scan_grid) if scan_grid else DEFAULT_GRID
    sizes = _parse_minor_sizes(minor_sizes) if minor_sizes else None
    rep = _run_classify(
        degree, mult, minor_sizes=sizes, scan=scan, grid=grid, budget=budget, seed=seed
    )
    if report_path:
        path = Path(report_path)
        if path.suffix == ".json":
            path.write_text(json.dumps(rep.to_obj(), indent=2), encoding="utf-8")
        elif path.suffix == ".md":
            path.write_text(rep.markdown(), encoding="utf-8")
        else:
            raise click.BadParameter("report path must end in .json or .md")
    click.echo(rep.text())
    if not rep.passed:
        raise SystemExit(1)


@main.command("scan")
@click.option("--degree", "-p", type=int, required=True)
@click.option("--mult", "-q", type=int, required=True)
@click.option("--case", "case_index", type=int, required=True)
@click.option("--grid", help="comma-separated rationals")
@click.option("--budget", type=int, default=3000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_scan(degree, mult, case_index, grid, budget, seed, as_json):
    """Genericity scan of one case; unexplained low-rank points fail."""
    case = _case_of(degree, mult, case_index)
    g = _parse_grid(grid) if grid else DEFAULT_GRID
    rep = genericity_scan(degree, mult, case, grid=g, budget=budget, seed=seed)
    if as_json:
        click.echo(json.dumps(rep.to_obj(), indent=2))
    else:
        hist = ", ".join(f"{r}: {n}" for r, n in sorted(rep.histogram.items()))
        tag = "exhaustive" if rep.exhaustive else f"sampled {rep.sampled}"
        click.echo(f"case {case_index} ({case.label}), {tag}")
        click.echo(f"rank histogram: {{{hist}}}")
        for pt, rank, name in rep.hits:
            label = f" [{name}]" if name else ""
            click.echo(f"classified rank {rank} at ({', '.join(map(str, pt))}){label}")
        for pt, rank in rep.unexplained:
            click.echo(f"UNEXPLAINED rank {rank} at ({', '.join(map(str, pt))})")
    if not rep.passed:
        raise SystemExit(1)


if __name__ == "__main__":
    main()

"""Command-line front end: JSON documents, subcommands, and the benchmark."""

from __future__ import annotations

import json
import math
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import click
import numpy as np

from . import __version__, hardness, satenc
from .analysis import NotWttError, find_wtt_violation
from .assign import assign_wtt, verify
from .core import (
    FILLER_NAME,
    UNDEFINED,
    Assignment,
    CapacityError,
    GameForm,
    GameFormError,
    assignment_from_names,
    assignment_names,
    project,
)
from .hardness import GadgetRecord, ReductionArtifact, ReductionLayout, ThreeCnf

# -- documents ---------------------------------------------------------------


def form_to_document(form: GameForm, encoding: Optional[str] = None) -> dict:
    """GameFormDocument dict; ``encoding`` picks dense/sparse (default: auto)."""
    if encoding is None:
        encoding = "sparse" if form.defined_count() * 4 < form.p else "dense"
    if encoding == "dense":
        cells = {
            "dense": [
                None if k == UNDEFINED else form.outcomes[k]
                for k in form.cells.tolist()
            ]
        }
    elif encoding == "sparse":
        entries = []
        for flat in np.flatnonzero(form.cells != UNDEFINED).tolist():
            entries.append(
                [list(form.profile_of(flat)), form.outcomes[int(form.cells[flat])]]
            )
        cells = {"sparse": entries}
    else:
        raise GameFormError(f"unknown cell encoding {encoding!r}")
    return {
        "players": form.n,
        "dims": list(form.dims),
        "outcomes": list(form.outcomes),
        "cells": cells,
    }


def form_from_document(doc) -> GameForm:
    if not isinstance(doc, dict):
        raise GameFormError("form document must be a JSON object")
    for key in ("players", "dims", "outcomes", "cells"):
        if key not in doc:
            raise GameFormError(f"form document missing key {key!r}")
    dims = doc["dims"]
    if (
        not isinstance(dims, list)
        or not dims
        or any(not isinstance(d, int) or d < 0 for d in dims)
    ):
        raise GameFormError("dims must be a list of non-negative integers")
    if doc["players"] != len(dims):
        raise GameFormError(
            f"players={doc['players']} does not match {len(dims)} dims entries"
        )
    outcomes = doc["outcomes"]
    if not isinstance(outcomes, list) or any(
        not isinstance(o, str) for o in outcomes
    ):
        raise GameFormError("outcomes must be a list of names")
    cells_doc = doc["cells"]
    if not isinstance(cells_doc, dict) or len(cells_doc) != 1:
        raise GameFormError('cells must hold exactly one of "dense" or "sparse"')
    p = math.prod(dims)
    table = {name: k for k, name in enumerate(outcomes)}
    if len(table) != len(outcomes):
        raise GameFormError("duplicate outcome names")
    ids = np.full(p, UNDEFINED, dtype=np.int32)
    if "dense" in cells_doc:
        dense = cells_doc["dense"]
        if not isinstance(dense, list) or len(dense) != p:
            raise GameFormError(
                f"dense cells must list all {p} entries in row-major order"
            )
        for flat, name in enumerate(dense):
            if name is None:
                continue
            if name not in table:
                raise GameFormError(f"cell outcome {name!r} not declared")
            ids[flat] = table[name]
    elif "sparse" in cells_doc:
        seen = set()
        for entry in cells_doc["sparse"]:
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not isinstance(entry[0], list)
            ):
                raise GameFormError(
                    "sparse entries must be [coordinate-list, outcome-name] pairs"
                )
            coords, name = entry
            if len(coords) != len(dims) or any(
                not isinstance(c, int) or not 0 <= c < d
                for c, d in zip(coords, dims)
            ):
                raise GameFormError(f"sparse coordinates {coords} out of range")
            flat = 0
            for c, d in zip(coords, dims):
                flat = flat * d + c
            if flat in seen:
                raise GameFormError(f"duplicate sparse coordinates {coords}")
            seen.add(flat)
            if name not in table:
                raise GameFormError(f"cell outcome {name!r} not declared")
            ids[flat] = table[name]
    else:
        raise GameFormError('cells must hold exactly one of "dense" or "sparse"')
    form = GameForm(dims, outcomes, ids)
    if FILLER_NAME in table and not form.is_fully_defined():
        raise GameFormError(
            f"the outcome name {FILLER_NAME!r} is reserved for filling; "
            "a partial form may not declare it"
        )
    return form


def assignment_to_document(form: GameForm, assignment: Assignment) -> dict:
    return {"assign": assignment_names(form, assignment)}


def assignment_from_document(form: GameForm, doc) -> Assignment:
    if not isinstance(doc, dict) or "assign" not in doc:
        raise GameFormError('assignment document must hold key "assign"')
    lanes = doc["assign"]
    if not isinstance(lanes, list) or len(lanes) != form.n:
        raise GameFormError(f"assignment needs {form.n} per-player lists")
    for lane, d in zip(lanes, form.dims):
        if not isinstance(lane, list) or len(lane) != d:
            raise GameFormError("assignment lane lengths must match dims")
    return assignment_from_names(form, lanes)


def artifact_to_document(artifact: ReductionArtifact) -> dict:
    lay = artifact.layout
    return {
        "form": form_to_document(artifact.form),
        "cnf": {
            "num_vars": artifact.cnf.num_vars,
            "clauses": [list(c) for c in artifact.cnf.clauses],
        },
        "layout": {
            "num_clauses": lay.num_clauses,
            "box_planes": [list(b) for b in lay.box_planes],
            "clause_outcomes": list(lay.clause_outcomes),
            "tokens": [list(t) for t in lay.tokens],
            "filler": lay.filler,
            "gadgets": [
                {
                    "kind": g.kind,
                    "occurrences": [list(o) for o in g.occurrences],
                    "planes": [list(p) for p in g.planes],
                    "outcomes": list(g.outcomes),
                }
                for g in lay.gadgets
            ],
        },
    }


def artifact_from_document(doc) -> ReductionArtifact:
    try:
        form = form_from_document(doc["form"])
        cnf = ThreeCnf(
            doc["cnf"]["num_vars"],
            tuple(tuple(c) for c in doc["cnf"]["clauses"]),
        )
        lay = doc["layout"]
        layout = ReductionLayout(
            num_clauses=lay["num_clauses"],
            box_planes=tuple(tuple(b) for b in lay["box_planes"]),
            clause_outcomes=tuple(lay["clause_outcomes"]),
            tokens=tuple(tuple(t) for t in lay["tokens"]),
            gadgets=tuple(
                GadgetRecord(
                    kind=g["kind"],
                    occurrences=tuple(tuple(o) for o in g["occurrences"]),
                    planes=tuple(tuple(p) for p in g["planes"]),
                    outcomes=tuple(g["outcomes"]),
                )
                for g in lay["gadgets"]
            ),
            filler=lay["filler"],
        )
    except (KeyError, TypeError) as exc:
        raise GameFormError(f"malformed layout document: {exc}") from None
    return ReductionArtifact(form, layout, cnf)


# -- IO helpers --------------------------------------------------------------


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise click.UsageError(f"{path}: {exc.strerror or exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.UsageError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        )


def _load_form(path: str) -> GameForm:
    try:
        return form_from_document(_read_json(path))
    except GameFormError as exc:
        raise click.UsageError(f"{path}: {exc}")


def _write_json(doc, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise click.UsageError(f"{what} must be comma-separated integers: {text!r}")


# -- commands ----------------------------------------------------------------


@click.group()
@click.version_option(__version__, prog_name="gameforms")
def main() -> None:
    """Assignability toolkit for n-person game forms."""


@main.command("check-wtt")
@click.argument("form_file")
def cmd_check_wtt(form_file: str) -> None:
    """Report whether every 2x2 subarray has a constant row or column."""
    form = _load_form(form_file)
    hit = find_wtt_violation(form)
    if hit is None:
        click.echo("WTT: yes")
        return
    cells = hit.profiles(form)
    click.echo("WTT: no")
    click.echo(f"direction: {hit.direction}")
    click.echo(f"hyperplanes: {hit.j}, {hit.k}")
    click.echo(f"lines: {hit.line_a}, {hit.line_b}")
    for plane, (xa, xb) in zip(
        (hit.j, hit.k), ((cells[0], cells[1]), (cells[2], cells[3]))
    ):
        va = form.get(xa) or FILLER_NAME
        vb = form.get(xb) or FILLER_NAME
        click.echo(f"  plane {plane}: {xa} -> {va}   {xb} -> {vb}")
    sys.exit(1)


@main.command("assign")
@click.argument("form_file")
@click.option("-o", "--out", default=None, help="Assignment output path (default: stdout).")
@click.option("--trace", is_flag=True, help="Print construction decisions.")
def cmd_assign(form_file: str, out: Optional[str], trace: bool) -> None:
    """Construct a verified assignment for a WTT form."""
    form = _load_form(form_file)
    try:
        cert = assign_wtt(form)
    except NotWttError as exc:
        click.echo(f"not WTT: {exc}")
        click.echo("hint: `gameforms solve` searches non-WTT forms")
        sys.exit(1)
    if trace:
        for line in cert.trace:
            click.echo(f"# {line}")
    _write_json(assignment_to_document(form, cert.assignment), out)


@main.command("solve")
@click.argument("form_file")
@click.option(
    "--method",
    type=click.Choice(["auto", "two_sat", "dpll", "brute"]),
    default="auto",
    show_default=True,
)
@click.option("--max-conflicts", default=0, show_default=True, help="0 = unlimited.")
@click.option("-o", "--out", default=None, help="Assignment output path.")
def cmd_solve(form_file: str, method: str, max_conflicts: int, out: Optional[str]) -> None:
    """Decide assignability; write a feasible assignment when one exists."""
    form = _load_form(form_file)
    try:
        model = satenc.solve(
            form,
            method=None if method == "auto" else method,
            max_conflicts=max_conflicts,
        )
    except CapacityError as exc:
        click.echo(f"capacity: {exc}")
        sys.exit(3)
    except GameFormError as exc:
        raise click.UsageError(str(exc))
    if model is None:
        click.echo("UNSAT")
        sys.exit(1)
    click.echo("SAT")
    _write_json(assignment_to_document(form, model), out)


@main.command("verify")
@click.argument("form_file")
@click.argument("assignment_file")
def cmd_verify(form_file: str, assignment_file: str) -> None:
    """Check that an assignment covers every defined cell."""
    form = _load_form(form_file)
    try:
        assignment = assignment_from_document(form, _read_json(assignment_file))
    except GameFormError as exc:
        raise click.UsageError(f"{assignment_file}: {exc}")
    if verify(form, assignment):
        click.echo("verified: yes")
    else:
        click.echo("verified: no")
        sys.exit(1)


@main.command("project")
@click.argument("form_file")
@click.option("--coalition", required=True, help="Comma-separated player indices.")
@click.option("-o", "--out", default=None)
def cmd_project(form_file: str, coalition: str, out: Optional[str]) -> None:
    """Write the two-person coalition projection."""
    form = _load_form(form_file)
    players = _parse_int_list(coalition, "--coalition")
    try:
        proj = project(form, players)
    except GameFormError as exc:
        raise click.UsageError(str(exc))
    _write_json(form_to_document(proj), out)


@main.command("encode")
@click.argument("form_file")
@click.option("-o", "--out", default=None, help="DIMACS output path (default: stdout).")
def cmd_encode(form_file: str, out: Optional[str]) -> None:
    """Emit the covering CNF in DIMACS format."""
    form = _load_form(form_file)
    text = satenc.emit_dimacs(satenc.encode(form))
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


@main.command("reduce")
@click.argument("cnf_file")
@click.option(
    "--mode",
    type=click.Choice(["partial3", "full4"]),
    default="partial3",
    show_default=True,
)
@click.option("-o", "--out", required=True, help="Game-form output path.")
@click.option(
    "--layout",
    "layout_out",
    default=None,
    help="Layout metadata path (default: <out>.layout.json).",
)
def cmd_reduce(cnf_file: str, mode: str, out: str, layout_out: Optional[str]) -> None:
    """Reduce a 3-CNF to a game form whose assignability mirrors SAT."""
    try:
        text = Path(cnf_file).read_text()
    except OSError as exc:
        raise click.UsageError(f"{cnf_file}: {exc.strerror or exc}")
    try:
        phi = ThreeCnf.from_dimacs(text)
        artifact = (
            hardness.reduce_partial3(phi)
            if mode == "partial3"
            else hardness.reduce_full4(phi)
        )
    except GameFormError as exc:
        raise click.UsageError(str(exc))
    if layout_out is None:
        layout_out = f"{out}.layout.json"
    _write_json(form_to_document(artifact.form), out)
    _write_json(artifact_to_document(artifact), layout_out)
    click.echo(
        f"wrote {out} ({'x'.join(str(d) for d in artifact.form.dims)}, "
        f"{len(artifact.layout.gadgets)} gadgets) and {layout_out}"
    )


@main.command("decode")
@click.argument("layout_file")
@click.argument("assignment_file")
def cmd_decode(layout_file: str, assignment_file: str) -> None:
    """Read a satisfying valuation off a feasible reduction assignment."""
    try:
        artifact = artifact_from_document(_read_json(layout_file))
    except GameFormError as exc:
        raise click.UsageError(f"{layout_file}: {exc}")
    try:
        assignment = assignment_from_document(
            artifact.form, _read_json(assignment_file)
        )
    except GameFormError as exc:
        raise click.UsageError(f"{assignment_file}: {exc}")
    try:
        valuation = hardness.decode(artifact, assignment)
    except GameFormError as exc:
        click.echo(f"decode failed: {exc}")
        sys.exit(1)
    for v in sorted(valuation):
        click.echo(f"x{v} = {'true' if valuation[v] else 'false'}")
    click.echo("formula satisfied: yes")


@main.command("gen")
@click.option(
    "--family",
    type=click.Choice(["nonassignable", "random", "random-wtt"]),
    required=True,
)
@click.option("--players", default=None, type=int)
@click.option("--strategies", default=None, type=int, help="nonassignable: m.")
@click.option("--dims", default=None, help="random families: comma-separated extents.")
@click.option("--outcomes", default=None, type=int, help="random families: alphabet size.")
@click.option("--seed", default=None, type=int, help="required for random families.")
@click.option("--max-tries", default=100000, show_default=True)
@click.option("-o", "--out", default=None)
def cmd_gen(
    family: str,
    players: Optional[int],
    strategies: Optional[int],
    dims: Optional[str],
    outcomes: Optional[int],
    seed: Optional[int],
    max_tries: int,
    out: Optional[str],
) -> None:
    """Generate fixture families."""
    if family == "nonassignable":
        if players is None or strategies is None:
            raise click.UsageError(
                "--family nonassignable needs --players and --strategies"
            )
        try:
            form = hardness.gen_min_outcome_nonassignable(players, strategies)
        except GameFormError as exc:
            raise click.UsageError(str(exc))
        _write_json(form_to_document(form, encoding="sparse"), out)
        return
    if seed is None:
        raise click.UsageError(f"--family {family} needs --seed")
    if dims is None or outcomes is None or outcomes < 1:
        raise click.UsageError(f"--family {family} needs --dims and --outcomes")
    extents = _parse_int_list(dims, "--dims")
    if not extents or any(d < 1 for d in extents):
        raise click.UsageError("--dims needs positive extents")
    if players is not None and players != len(extents):
        raise click.UsageError("--players disagrees with --dims")
    names = tuple(f"o{k + 1}" for k in range(outcomes))
    if family == "random-wtt" and math.prod(extents) > 64:
        click.echo("capacity: rejection sampling is limited to 64 cells")
        sys.exit(3)
    rng = np.random.default_rng(seed)
    from .analysis import is_wtt

    for _ in range(max_tries):
        cells = rng.integers(0, outcomes, size=math.prod(extents), dtype=np.int32)
        form = GameForm(extents, names, cells)
        if family == "random" or is_wtt(form):
            _write_json(form_to_document(form, encoding="dense"), out)
            return
    click.echo(f"capacity: no WTT sample within {max_tries} tries")
    sys.exit(3)


@main.command("bench")
@click.option("--sizes", default="100,1000,10000", show_default=True)
@click.option("--players", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--repeat", default=3, show_default=True)
def cmd_bench(sizes: str, players: int, seed: int, repeat: int) -> None:
    """Time the WTT scan on both kernels and report log-log slopes.

    Violation-free forms are the worst case: the scan cannot exit early.
    Random forms are reported too; they bail out on the first violation.
    """
    targets = _parse_int_list(sizes, "--sizes")
    if players < 2 or not targets or any(t < 4 for t in targets):
        raise click.UsageError("need --players >= 2 and sizes >= 4")
    from . import _wtt_py

    try:
        from . import _kernels
    except ImportError:
        _kernels = None

    kernels = [("pure", _wtt_py.wtt_violation)]
    if _kernels is not None:
        kernels.append(("compiled", _kernels.wtt_violation))

    rng = np.random.default_rng(seed)
    rows: dict[str, list[tuple[int, float]]] = {name: [] for name, _ in kernels}
    for target in targets:
        side = max(2, round(target ** (1.0 / players)))
        dims = (side,) * players
        p = side**players
        constant = np.zeros(p, dtype=np.int32)
        random_cells = rng.integers(0, 3, size=p, dtype=np.int32)
        for name, fn in kernels:
            best = min(_time_one(fn, constant, dims, repeat=repeat))
            rand_t = min(_time_one(fn, random_cells, dims, repeat=repeat))
            rows[name].append((p, best))
            click.echo(
                f"{name:>8}  p={p:<8d} worst-case {best * 1e3:9.3f} ms   "
                f"random {rand_t * 1e3:9.3f} ms"
            )
    for name, series in rows.items():
        if len(series) >= 2:
            xs = np.log([p for p, _ in series])
            ys = np.log([max(t, 1e-9) for _, t in series])
            slope = float(np.polyfit(xs, ys, 1)[0])
            click.echo(f"{name:>8}  log-log slope {slope:.2f}")


def _time_one(fn, cells: np.ndarray, dims: Sequence[int], repeat: int) -> list[float]:
    times = []
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        fn(cells, tuple(dims))
        times.append(time.perf_counter() - t0)
    return times


if __name__ == "__main__":
    main()

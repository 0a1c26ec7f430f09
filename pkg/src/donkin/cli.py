"""Command-line surface: root-system queries, character computations, and
batch verification of orbit tables.

Output is deterministic; ``--format jsonl`` emits one JSON object per line
with a ``schema`` version field.  Exit status: 0 on success / all-pass, 1 on
verification failure, 2 on usage or parse errors.
"""
from __future__ import annotations

import json
import os
import sys
import time

import click

from . import characters as ch
from . import verifier
from .embeddings import chain_restriction_map, restrict_character
from .errors import DonkinError, TableSyntaxError
from .nilpotent import (
    JordanType,
    centralizer_dimension,
    centralizer_factor_labels,
    parse_orbit_tables,
    reductive_centralizer,
    unipotent_dimension,
    validate_jordan,
)
from .rootsystem import (
    GroupType,
    build_root_datum,
    highest_root,
    normalize_type,
    weyl_dim,
)

SCHEMA = 1


def _parse_weight(text: str, rank: int):
    try:
        coords = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise click.UsageError(f"bad weight {text!r}; expected comma-separated integers")
    if len(coords) != rank:
        raise click.UsageError(f"weight {text!r} has {len(coords)} coordinates, rank is {rank}")
    return coords


def _parse_group(text: str) -> GroupType:
    try:
        return GroupType.parse(text)
    except DonkinError as exc:
        raise click.UsageError(str(exc))


def _emit(fmt, kind, payload, text_lines):
    if fmt == "jsonl":
        click.echo(json.dumps({"schema": SCHEMA, "kind": kind, **payload},
                              sort_keys=True))
    else:
        for line in text_lines:
            click.echo(line)


def _load_cache():
    if os.environ.get("DONKIN_NO_CACHE"):
        return
    ch.load_cache_file()


def _save_cache():
    if os.environ.get("DONKIN_NO_CACHE"):
        return
    try:
        ch.save_cache_file()
    except OSError:
        pass  # cache is best-effort only


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "jsonl"]),
              default="text", show_default=True, help="Output format.")
@click.option("--timing", is_flag=True, help="Append a wall-clock timing line.")
@click.pass_context
def main(ctx, fmt, timing):
    """Exact root-system and character computations, plus table verification."""
    ctx.ensure_object(dict)
    ctx.obj["fmt"] = fmt
    ctx.obj["timing"] = timing
    ctx.obj["t0"] = time.perf_counter()
    ctx.call_on_close(lambda: _finish(ctx))


def _finish(ctx):
    if ctx.obj.get("timing"):
        dt = time.perf_counter() - ctx.obj["t0"]
        click.echo(f"# elapsed {dt:.3f}s", err=True)


@main.command()
@click.argument("gtype")
@click.pass_context
def roots(ctx, gtype):
    """Positive-root count and highest root of TYPE (e.g. E8 or A1.B6)."""
    gt = _parse_group(gtype)
    rd = build_root_datum(gt)
    hr = highest_root(rd) if rd.positive_roots else None
    _emit(ctx.obj["fmt"], "roots",
          {"type": str(rd.gtype), "rank": rd.rank,
           "positive_roots": len(rd.positive_roots),
           "highest_root": list(hr) if hr else None,
           "group_dimension": rd.group_dimension()},
          [f"type {rd.gtype} (rank {rd.rank})",
           f"positive roots: {len(rd.positive_roots)}",
           f"highest root: {','.join(map(str, hr)) if hr else '(none)'}",
           f"group dimension: {rd.group_dimension()}"])


@main.command()
@click.argument("gtype")
@click.argument("lam")
@click.pass_context
def char(ctx, gtype, lam):
    """Dual Weyl character of TYPE at highest weight LAM (comma-separated)."""
    gt = _parse_group(gtype)
    rd = build_root_datum(gt)
    w = _parse_weight(lam, rd.rank)
    _load_cache()
    chi = ch.dual_weyl_character(rd, w)
    _save_cache()
    support = [(",".join(map(str, k)), m) for k, m in chi.items_sorted()]
    _emit(ctx.obj["fmt"], "char",
          {"type": str(rd.gtype), "highest_weight": list(w),
           "dimension": chi.dim(), "weights": dict(support)},
          [f"type {rd.gtype}, highest weight {lam}",
           f"dimension: {chi.dim()} (Weyl formula: {weyl_dim(rd, w)})"]
          + [f"  {k}: {m}" for k, m in support])


def _read_character(rd, path):
    support = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                mult_text, coords_text = line.split(None, 1)
                mult = int(mult_text)
                w = tuple(int(c) for c in coords_text.split(","))
            except ValueError:
                raise click.UsageError(f"{path}:{lineno}: expected 'MULT c1,c2,...'")
            if len(w) != rd.rank:
                raise click.UsageError(f"{path}:{lineno}: weight has wrong length")
            support[w] = support.get(w, 0) + mult
    return ch.FormalCharacter(rd.gtype, support)


@main.command()
@click.argument("gtype")
@click.argument("source")
@click.pass_context
def decompose(ctx, gtype, source):
    """Decompose a character into dual Weyl characters.

    SOURCE is @FILE with lines 'MULT c1,c2,...' over TYPE's coordinates.
    """
    gt = _parse_group(gtype)
    rd = build_root_datum(gt)
    if not source.startswith("@"):
        raise click.UsageError("SOURCE must be @FILE")
    _load_cache()
    chi = _read_character(rd, source[1:])
    dec = ch.decompose_dual_weyl(rd, chi)
    _save_cache()
    terms = [(",".join(map(str, k)), m) for k, m in dec.items_sorted()]
    _emit(ctx.obj["fmt"], "decompose",
          {"type": str(rd.gtype), "dimension": chi.dim(), "exact": dec.exact,
           "terms": dict(terms)},
          [f"type {rd.gtype}, dimension {chi.dim()}",
           f"exact: {'yes' if dec.exact else 'NO (virtual)'}"]
          + [f"  nabla({k}): {m}" for k, m in terms])


@main.command()
@click.argument("gtype")
@click.argument("lam")
@click.option("--p", "prime", type=int, default=None,
              help="Report restrictedness of every highest weight at this prime.")
@click.pass_context
def exterior(ctx, gtype, lam, prime):
    """Exterior algebra of the dual Weyl module: decomposition and, with
    --p, a restrictedness report (exit 1 if some weight is not restricted)."""
    gt = _parse_group(gtype)
    rd = build_root_datum(gt)
    w = _parse_weight(lam, rd.rank)
    _load_cache()
    chi = ch.dual_weyl_character(rd, w)
    ea = ch.exterior_algebra(chi)
    dec = ch.decompose_dual_weyl(rd, ea)
    _save_cache()
    terms = [(",".join(map(str, k)), m) for k, m in dec.items_sorted()]
    lines = [f"type {rd.gtype}, module dimension {chi.dim()}, "
             f"exterior algebra dimension {ea.dim()}",
             f"exact: {'yes' if dec.exact else 'NO (virtual)'}"]
    lines += [f"  nabla({k}): {m}" for k, m in terms]
    payload = {"type": str(rd.gtype), "module_dim": chi.dim(),
               "algebra_dim": ea.dim(), "exact": dec.exact, "terms": dict(terms)}
    ok = True
    if prime is not None:
        bad = [k for k, _ in dec.items_sorted()
               if not ch.is_restricted(rd, k, prime)]
        ok = dec.exact and not bad
        payload["p"] = prime
        payload["all_restricted"] = not bad
        payload["verdict"] = "PASS" if ok else "FAIL"
        lines.append(
            f"all highest weights restricted at p={prime}: "
            f"{'PASS' if ok else 'FAIL'}"
            + (f" (unrestricted: {['|'.join(map(str, b)) for b in bad]})" if bad else ""))
    _emit(ctx.obj["fmt"], "exterior", payload, lines)
    if not ok:
        sys.exit(1)


@main.command()
@click.argument("chain")
@click.argument("lam")
@click.pass_context
def restrict(ctx, chain, lam):
    """Restrict a dual Weyl character down a chain.

    CHAIN uses the table grammar, e.g. "B2 -[auto]-> A3"; LAM is a dominant
    weight of the chain's final (ambient) type.  Prints the restricted
    character's decomposition in the chain-start group.
    """
    recs = _parse_chain(chain)
    total = chain_restriction_map(recs)
    if total is None:
        raise click.UsageError("chain contains a map-less max-rank step")
    amb_rd = build_root_datum(normalize_type(recs[-1].amb))
    w = _parse_weight(lam, amb_rd.rank)
    _load_cache()
    chi = ch.dual_weyl_character(amb_rd, w)
    restricted = restrict_character(chi, total)
    sub_rd = build_root_datum(normalize_type(total.target))
    dec = ch.decompose_dual_weyl(sub_rd, restricted)
    _save_cache()
    terms = [(",".join(map(str, k)), m) for k, m in dec.items_sorted()]
    _emit(ctx.obj["fmt"], "restrict",
          {"ambient": str(amb_rd.gtype), "subgroup": str(sub_rd.gtype),
           "highest_weight": list(w), "dimension": chi.dim(),
           "exact": dec.exact, "terms": dict(terms)},
          [f"restrict {amb_rd.gtype} nabla({lam}) (dim {chi.dim()}) to {sub_rd.gtype}",
           f"exact: {'yes' if dec.exact else 'NO (virtual)'}"]
          + [f"  nabla({k}): {m}" for k, m in terms])


def _parse_chain(text):
    fake = f"cli\t1\t{text}"
    try:
        recs = parse_orbit_tables(fake)
    except TableSyntaxError as exc:
        raise click.UsageError(f"bad chain: {exc}")
    return recs[0].chain


@main.group()
def orbit():
    """Nilpotent orbit queries."""


@orbit.command("classical")
@click.argument("kind", type=click.Choice(["GL", "Sp", "SO"]))
@click.argument("partition")
@click.pass_context
def orbit_classical(ctx, kind, partition):
    """Validity, centralizer type, and centralizer dimension of a Jordan type."""
    try:
        parts = [int(p) for p in partition.split(",")]
    except ValueError:
        raise click.UsageError("PARTITION must be comma-separated integers")
    jt = JordanType.from_partition(kind, parts)
    valid = validate_jordan(jt, jt.n)
    fmt = ctx.parent.parent.obj["fmt"]
    if not valid:
        _emit(fmt, "orbit",
              {"kind": kind, "partition": parts, "valid": False},
              [f"{jt}: not a valid nilpotent Jordan type"])
        sys.exit(1)
    labels = centralizer_factor_labels(jt)
    _emit(fmt, "orbit",
          {"kind": kind, "partition": parts, "valid": True,
           "centralizer_factors": list(labels),
           "centralizer_type": str(reductive_centralizer(jt)),
           "centralizer_dimension": centralizer_dimension(jt),
           "unipotent_dimension": unipotent_dimension(jt)},
          [f"{jt}: valid",
           f"reductive centralizer: {'.'.join(labels)} "
           f"(root system {reductive_centralizer(jt)})",
           f"centralizer dimension: {centralizer_dimension(jt)} "
           f"(unipotent part {unipotent_dimension(jt)})"])


def _read_tables(paths):
    out = []
    for path in paths:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        try:
            out.append((path, parse_orbit_tables(text)))
        except TableSyntaxError as exc:
            click.echo(f"error: {path}: {exc}", err=True)
            sys.exit(2)
    return out


@main.command("verify-tables")
@click.argument("files", nargs=-1, required=True, type=click.Path())
@click.pass_context
def verify_tables(ctx, files):
    """Verify every record of the given table files; exit 1 on any failure."""
    fmt = ctx.obj["fmt"]
    total_pass = total_fail = 0
    for path, recs in _read_tables(files):
        summary = verifier.verify_all(recs)
        for rep in summary.reports:
            status = "PASS" if rep.passed else "FAIL"
            line = (f"{status} {rep.record.label} ({rep.record.ambient}): "
                    f"p_min={rep.p_min}, bound={rep.good_bound}")
            if rep.notes:
                line += " -- " + "; ".join(rep.notes)
            _emit(fmt, "verify", {"file": path, **rep.as_dict()}, [line])
        total_pass += summary.passed
        total_fail += summary.failed
    _emit(fmt, "verify-summary",
          {"passed": total_pass, "failed": total_fail},
          [f"summary: {total_pass} passed, {total_fail} failed"])
    if total_fail:
        sys.exit(1)


@main.command("spot-check")
@click.argument("files", nargs=-1, required=True, type=click.Path())
@click.option("--lambda", "lam", required=True,
              help="Dominant weight of the ambient group, comma-separated.")
@click.pass_context
def spot_check_cmd(ctx, files, lam):
    """Character-level spot check of every chain; exit 1 on any failure."""
    fmt = ctx.obj["fmt"]
    _load_cache()
    failed = 0
    for path, recs in _read_tables(files):
        if not recs:
            continue
        ambient = next((r.ambient for r in recs if r.ambient), None)
        if ambient is None:
            click.echo(f"error: {path}: cannot infer the ambient group", err=True)
            sys.exit(2)
        rd = build_root_datum(ambient)
        w = _parse_weight(lam, rd.rank)
        for rec in recs:
            v = verifier.spot_check(rec, w)
            failed += v.status == "FAIL"
            _emit(fmt, "spot-check", {"file": path, **v.as_dict()},
                  [f"{v.status} {rec.label} ({ambient}): {v.detail}"])
    _save_cache()
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()

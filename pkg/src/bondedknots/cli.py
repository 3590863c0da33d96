"""Command line interface.

Exit codes: 0 on success, 1 on invalid input, 2 when ``classify`` leaves
groups of diagrams that could not be told apart.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from bondedknots.diagram import Diagram, DiagramError, parse_pd, write_pd
from bondedknots.generate import ShadowGraph, admissible, expand_crossings, generate_shadows
from bondedknots.pipeline import ClassRecord, PipelineConfig, run_pipeline
from bondedknots.search import SearchBudget, simplify_report
from bondedknots.tables import FORMATS, emit_tables, records_from_json
from bondedknots.yamada import yamada, yamada_raw

EXIT_UNRESOLVED = 2


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from exc


def _parse(text: str) -> Diagram:
    try:
        return parse_pd(text)
    except DiagramError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Tabulate bonded knots up to a singularity number."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s")


@main.command()
@click.option("--max-s", type=int, required=True, help="Largest number of vertices (singularity number).")
@click.option("--reduced", is_flag=True, help="Skip shadows whose expansions all admit an obvious decreasing move.")
@click.option("--format", "fmt", type=click.Choice(["jsonl", "text"]), default="jsonl", show_default=True)
@click.option("--admissible-only", is_flag=True, help="Emit only shadows that can carry bonds.")
def generate(max_s: int, reduced: bool, fmt: str, admissible_only: bool) -> None:
    """Enumerate connected shadows with at least two trivalent vertices."""
    for sh in generate_shadows(max_s, reduced=reduced):
        if admissible_only and not admissible(sh):
            continue
        click.echo(sh.to_json() if fmt == "jsonl" else sh.to_text())


@main.command()
@click.argument("source", type=click.File("r"), default="-")
def expand(source) -> None:
    """Expand shadow JSON lines (as written by ``generate``) into PD codes."""
    for line in source:
        if not line.strip():
            continue
        sh = ShadowGraph.from_json(line)
        for d in expand_crossings(sh):
            click.echo(write_pd(d))


@main.command(name="yamada")
@click.argument("pd", required=False)
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Read one PD code per line.")
@click.option("--raw", is_flag=True, help="Print the unnormalized polynomial.")
def yamada_cmd(pd: str | None, path: Path | None, raw: bool) -> None:
    """Yamada polynomial of a PD code (normalized up to +-A^n)."""
    if (pd is None) == (path is None):
        raise click.UsageError("give either a PD code or --file")
    lines = [pd] if pd is not None else [x for x in path.read_text().splitlines() if x.strip()]
    for text in lines:
        d = _parse(text)
        click.echo(str(yamada_raw(d) if raw else yamada(d)))


@main.command()
@click.argument("pd")
@click.option("--depth", type=int, default=0, show_default=True, help="Crossing-increasing depth.")
@click.option("--max-states", type=int, default=20000, show_default=True)
@click.option("--trace", is_flag=True, help="Print the move trace to stderr.")
def simplify(pd: str, depth: int, max_states: int, trace: bool) -> None:
    """Simplify a diagram within a search budget and print its PD code."""
    d = _parse(pd)
    rep = simplify_report(d, SearchBudget(max_up=depth, max_states=max_states))
    if trace:
        for line in rep.trace:
            click.echo(line, err=True)
    r = rep.diagram
    click.echo(write_pd(r) if not r.free_loops else json.dumps(r.to_json()))
    if rep.exhausted:
        click.echo("warning: state budget exhausted; result may not be minimal", err=True)


@main.command()
@click.option("--max-s", type=int, default=7, show_default=True)
@click.option("--depths", default="1,2,3", show_default=True, help="Depth schedule, comma separated.")
@click.option("--max-states", default=None, help="State cap per depth, comma separated.")
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--checkpoint", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory for stage checkpoints, tables and the report.")
@click.option("--import-planar-code", "planar_code", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="Take shadows from a planar_code file instead of generating them.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="md", show_default=True)
def classify(max_s: int, depths: str, max_states: str | None, jobs: int, checkpoint: Path | None,
             planar_code: Path | None, fmt: str) -> None:
    """Run the full tabulation and print the tables."""
    cfg = PipelineConfig(
        max_s=max_s,
        depths=_int_list(depths),
        max_states=_int_list(max_states) if max_states else None,
        jobs=jobs,
        checkpoint=checkpoint,
        planar_code=planar_code,
    )
    result = run_pipeline(cfg, progress=lambda msg: click.echo(msg, err=True))
    if checkpoint is not None:
        for f in FORMATS:
            emit_tables(result.records, f, checkpoint)
    click.echo(emit_tables(result.records, fmt), nl=False)
    for ex in result.excluded:
        click.echo(f"excluded ({ex['reason']}): {ex['pd']}", err=True)
    if not result.resolved:
        for u in result.unresolved:
            click.echo(f"unresolved: {json.dumps(u, sort_keys=True)}", err=True)
        sys.exit(EXIT_UNRESOLVED)


@main.command()
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="md", show_default=True)
@click.option("--checkpoint", type=click.Path(exists=True, file_okay=False, path_type=Path), default=None,
              help="Checkpoint directory of a finished classify run.")
@click.option("--input", "source", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="JSON records as written by --format json.")
def tables(fmt: str, checkpoint: Path | None, source: Path | None) -> None:
    """Re-render the tables of a finished run."""
    if (checkpoint is None) == (source is None):
        raise click.UsageError("give either --checkpoint or --input")
    if source is not None:
        records = records_from_json(source.read_text())
    else:
        path = checkpoint / "records.jsonl"
        if not path.exists():
            raise click.ClickException(f"{path} not found; run classify first")
        records = [ClassRecord.from_dict(json.loads(x)) for x in path.read_text().splitlines() if x.strip()]
    click.echo(emit_tables(records, fmt), nl=False)


if __name__ == "__main__":  # pragma: no cover
    main()

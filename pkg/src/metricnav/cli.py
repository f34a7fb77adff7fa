"""Command-line surface: ingest / generate / repl / serve.

Exit codes: 0 success, 1 usage problems, 2 data errors.
"""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from .datastore import (
    CSV_NAMES,
    Dataset,
    RowError,
    ValidationError,
    generate_fixture,
    load_dataset,
    write_csvs,
)
from .lexicon import load_lexicon
from .model import DismissQuery, GoHome, PressedElement, PressedKind
from .server import create_app
from .session import Session
from .timeparse import DateRange, ReferenceFrame
from .views import build_state_view, render_feedback_text, render_state_text


class DataError(click.ClickException):
    exit_code = 2


def _parse_span(text: str) -> DateRange:
    try:
        start_text, end_text = text.split("..")
        return DateRange(date.fromisoformat(start_text), date.fromisoformat(end_text))
    except ValueError as exc:
        raise click.UsageError(
            f"--span must look like 2016-01-01..2020-08-27 (got {text!r}): {exc}"
        )


def _parse_ref_date(text: str | None) -> date:
    if text is None:
        return date.today()
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise click.UsageError(f"--ref-date must be an ISO date (got {text!r})")


def _load_or_generate(
    data_dir: str | None, seed: int | None, span: str | None
) -> Dataset:
    if data_dir is not None:
        try:
            return load_dataset(data_dir)
        except (RowError, ValidationError) as exc:
            raise DataError(str(exc))
    if seed is None:
        raise click.UsageError("provide --data-dir, or --seed (with optional --span)")
    span_range = _parse_span(span) if span else DateRange(
        date(2016, 1, 1), date(2020, 8, 27)
    )
    return generate_fixture(seed, span_range)


@click.group()
def cli() -> None:
    """Explore daily health metrics with natural-language commands."""


@cli.command()
@click.option("--data-dir", required=True, type=click.Path(exists=True, file_okay=False))
def ingest(data_dir: str) -> None:
    """Validate a CSV directory and report per-source record counts."""
    try:
        dataset = load_dataset(data_dir)
    except (RowError, ValidationError) as exc:
        raise DataError(str(exc))
    for source, name in CSV_NAMES.items():
        count = len(dataset.series[source])
        coverage = dataset.coverage[source]
        span = f" ({coverage.start} .. {coverage.end})" if coverage else ""
        click.echo(f"{name}: {count} records{span}")
    click.echo(f"profile: step goal {dataset.profile.step_goal}")


@cli.command()
@click.option("--seed", type=int, required=True)
@click.option("--span", default="2016-01-01..2020-08-27", show_default=True)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def generate(seed: int, span: str, out_dir: str) -> None:
    """Write a deterministic synthetic dataset as CSV files."""
    dataset = generate_fixture(seed, _parse_span(span))
    written = write_csvs(dataset, Path(out_dir))
    for path in written:
        click.echo(f"wrote {path}")


def _pressed_for(session: Session, prefix: str) -> PressedElement:
    state = session.state
    if prefix == "@start":
        return PressedElement(PressedKind.START_DATE_LABEL, bound_value=state.range.start)
    if prefix == "@end":
        return PressedElement(PressedKind.END_DATE_LABEL, bound_value=state.range.end)
    slot = "a" if prefix == "@plotA" else "b"
    bound = None
    if state.comparison is not None:
        bound = state.comparison[0 if slot == "a" else 1]
    return PressedElement(PressedKind.AGGREGATION_PLOT, slot=slot, bound_value=bound)


def repl_loop(session: Session, in_stream, echo) -> None:
    """Read commands line by line; see the README for the command forms."""
    for raw in in_stream:
        line = raw.strip()
        if not line:
            continue
        if line == ":quit":
            break
        if line == ":state":
            echo(json.dumps(build_state_view(session), separators=(",", ":")))
            continue
        if line == ":undo":
            echo(render_feedback_text(session.undo()))
            echo(render_state_text(session))
            continue
        if line == ":dismiss":
            echo(render_feedback_text(session.dispatch(DismissQuery())))
            echo(render_state_text(session))
            continue
        if line == ":home":
            echo(render_feedback_text(session.dispatch(GoHome())))
            echo(render_state_text(session))
            continue
        if line.startswith(":swipe"):
            parts = line.split()
            direction = parts[1] if len(parts) > 1 else ""
            if direction not in ("back", "forward"):
                echo("usage: :swipe back|forward")
                continue
            echo(render_feedback_text(session.swipe_range(direction)))
            echo(render_state_text(session))
            continue
        if line.startswith(":"):
            echo(f"unknown command {line!r} "
                 "(:state :swipe :undo :dismiss :home :quit)")
            continue
        pressed = PressedElement()
        utterance = line
        for prefix in ("@start", "@end", "@plotA", "@plotB"):
            if line.startswith(prefix + " "):
                if prefix in ("@plotA", "@plotB") and session.state.comparison is None:
                    utterance = None
                    echo("invalid: There is no comparison plot on this page.")
                    break
                pressed = _pressed_for(session, prefix)
                utterance = line[len(prefix) + 1:]
                break
        if utterance is None:
            continue
        feedback = session.handle_utterance(utterance, pressed)
        echo(render_feedback_text(feedback))
        echo(render_state_text(session))


@cli.command()
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--seed", type=int)
@click.option("--span")
@click.option("--ref-date", "ref_date")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True, dir_okay=False))
def repl(
    data_dir: str | None,
    seed: int | None,
    span: str | None,
    ref_date: str | None,
    lexicon_path: str | None,
) -> None:
    """Interactive loop. Plain lines are utterances; prefix with @start/@end/
    @plotA/@plotB to simulate touch+speech; builtins: :state :swipe :undo
    :dismiss :home :quit."""
    dataset = _load_or_generate(data_dir, seed, span)
    frame = ReferenceFrame(_parse_ref_date(ref_date))
    lexicon = load_lexicon(lexicon_path) if lexicon_path else None
    session = Session(dataset, frame, lexicon)
    click.echo(f"ready (reference date {frame.reference_date.isoformat()})")
    click.echo(render_state_text(session))
    try:
        repl_loop(session, sys.stdin, click.echo)
    except (OSError, ValueError) as exc:
        raise DataError(f"input error: {exc}")


@cli.command()
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--seed", type=int)
@click.option("--span")
@click.option("--ref-date", "ref_date")
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static-dir", type=click.Path(exists=True, file_okay=False))
def serve(
    data_dir: str | None,
    seed: int | None,
    span: str | None,
    ref_date: str | None,
    port: int,
    host: str,
    static_dir: str | None,
) -> None:
    """Run the HTTP service (and optionally serve the web UI's static files)."""
    import uvicorn

    dataset = _load_or_generate(data_dir, seed, span)
    frame = ReferenceFrame(_parse_ref_date(ref_date))
    app = create_app(dataset, frame, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)


if __name__ == "__main__":
    main()

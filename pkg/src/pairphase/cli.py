"""Command line entry point: ``pairphase run | validate | presets``.

Exit codes: 0 success, 1 validation failure, 2 config error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .config import ConfigError, load_config
from .presets import describe, preset_config, preset_names
from .sweep import run_sweep, to_csv, to_json

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2


def _emit(table, out, fmt):
    text = to_csv(table) if fmt == "csv" else to_json(table)
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, newline="")
        click.echo(f"wrote {len(table.rows)} rows to {out}", err=True)
    failed = sum(1 for r in table.rows if str(r["status"]).startswith("error"))
    if failed:
        click.echo(f"{failed} of {len(table.rows)} rows failed; see the status column", err=True)


@click.group()
def main():
    """Geometric phase and entanglement of a qubit pair in bosonic or spin baths."""


@main.command()
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if omitted).")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def run(config, out, workers, fmt):
    """Run the sweep described by a YAML CONFIG file."""
    try:
        cfg = load_config(config)
    except ConfigError as err:
        click.echo(f"config error in {config}:\n{err}", err=True)
        sys.exit(EXIT_CONFIG)
    _emit(run_sweep(cfg, workers=workers), out, fmt)


@main.command()
@click.option("--filter", "name_filter", default=None, help="Only run checks whose name contains this text.")
def validate(name_filter):
    """Run the acceptance checks; exit 1 if any fails."""
    from .validation import CHECKS, run_checks

    results = run_checks(name_filter)
    if not results:
        click.echo(f"no check matches {name_filter!r}; names: {', '.join(CHECKS)}", err=True)
        sys.exit(EXIT_CONFIG)
    for res in results:
        click.echo(res.line())
    failed = [r for r in results if r.passed is False]
    passed = sum(1 for r in results if r.passed)
    click.echo(f"{passed} passed, {len(failed)} failed, {len(results) - passed - len(failed)} informational")
    sys.exit(EXIT_VALIDATION if failed else EXIT_OK)


@main.group()
def presets():
    """Shipped figure-data sweeps."""


@presets.command("list")
def presets_list():
    for name in preset_names():
        click.echo(f"{name:6s} {describe(name)}")


@presets.command("run")
@click.argument("name")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def presets_run(name, out, workers, fmt):
    """Run preset NAME."""
    try:
        cfg = preset_config(name)
    except KeyError as err:
        click.echo(str(err.args[0]), err=True)
        sys.exit(EXIT_CONFIG)
    _emit(run_sweep(cfg, workers=workers), out, fmt)


if __name__ == "__main__":
    main()

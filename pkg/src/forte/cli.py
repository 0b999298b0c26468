"""Operator entry points.

Subcommands: synth (write a synthetic year), ingest (validate and store a
CSV), fit (train and persist the reference model), serve (run the API), and
experiment run (headless experiments writing the same results.json the
service produces).

Configuration precedence: flags > FORTE_* environment variables > --config
file > defaults. Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__
from .dataset import CSV_HEADER, read_csv, write_csv
from .errors import ForteError, IngestError, InvalidSpec
from .experiment import (
    ExperimentEngine,
    ExperimentStatus,
    results_to_csv,
    results_to_json,
    spec_from_dict,
)
from .forecaster import Horizon, fit as fit_model
from .synth import SynthConfig, generate
from .timeseries import Penetration
from .workspace import Workspace

CONTEXT_SETTINGS = {"auto_envvar_prefix": "FORTE", "help_option_names": ["-h", "--help"]}


def _load_config(ctx: click.Context, param: click.Parameter, value: str | None):
    if value:
        try:
            ctx.default_map = json.loads(Path(value).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"cannot read config file {value}: {exc}")
    return value


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(__version__)
@click.option("--config", type=click.Path(), is_eager=True, expose_value=False,
              callback=_load_config, help="JSON config file with per-command defaults.")
def main():
    """Net-load forecast evaluation workbench."""


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _echo_config(pairs: dict) -> None:
    click.echo("config: " + " ".join(f"{k}={v}" for k, v in pairs.items()))


@main.command()
@click.option("--year", type=int, default=2020, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--gap-rate", type=float, default=0.0, show_default=True,
              help="Approximate fraction of weather samples made missing.")
@click.option("--base-load", type=float, default=2.0, show_default=True)
@click.option("--pv-capacity", type=float, default=5.0, show_default=True)
@click.option("--noise-sd", type=float, default=0.35, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
def synth(year, seed, gap_rate, base_load, pv_capacity, noise_sd, out):
    """Write one synthetic year as CSV and print channel summaries."""
    try:
        config = SynthConfig(year=year, seed=seed, gap_rate=gap_rate,
                             base_load_kw=base_load, pv_capacity_kw=pv_capacity,
                             noise_sd_kw=noise_sd)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    dataset = generate(config)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(dataset, out)
    click.echo(f"wrote {dataset.n_steps} rows to {out}")
    for col in CSV_HEADER[1:]:
        values = dataset.columns[col]
        present = values[~np.isnan(values)]
        missing_pct = 100.0 * (1.0 - present.size / values.size)
        click.echo(f"  {col:22s} mean={present.mean():8.2f} min={present.min():8.2f} "
                   f"max={present.max():8.2f} missing={missing_pct:.1f}%")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path), required=True)
def ingest(file, data_dir):
    """Validate a CSV and store it as the workspace dataset."""
    try:
        dataset = read_csv(file)
    except IngestError as exc:
        _fail(str(exc))
    workspace = Workspace(data_dir)
    workspace.save_dataset(dataset)
    click.echo(f"ingested {dataset.n_steps} rows "
               f"({dataset.start.date()} .. {dataset.end.date()}) into {data_dir}")


@main.command()
@click.option("--penetration", type=click.Choice([p.value for p in Penetration]),
              required=True)
@click.option("--horizon", type=click.Choice([h.value for h in Horizon]), required=True)
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--train-start", type=str, default=None,
              help="Training window start (ISO date); defaults to train-days before coverage end.")
@click.option("--train-days", type=int, default=28, show_default=True)
def fit(penetration, horizon, data_dir, train_start, train_days):
    """Fit the reference model and persist it in the workspace."""
    workspace = Workspace(data_dir)
    try:
        dataset = workspace.load_dataset()
        if train_start is None:
            start = dataset.end - timedelta(days=train_days)
        else:
            start = datetime.fromisoformat(train_start).replace(tzinfo=timezone.utc)
        frame = dataset.frame(start, start + timedelta(days=train_days),
                              Penetration(penetration))
        model = fit_model(frame, horizon, penetration)
        path = workspace.save_model(model)
    except ForteError as exc:
        _fail(str(exc))
    click.echo(f"fitted {penetration}/{horizon} on {start.date()} +{train_days}d -> {path}")
    click.echo(f"  residual 95% band: [{model.residual_q025:+.3f}, {model.residual_q975:+.3f}] kW")


@main.command()
@click.option("--port", type=click.IntRange(1, 65535), default=8000, show_default=True)
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker threads inside one experiment run.")
@click.option("--context-days", type=click.IntRange(min=1), default=28, show_default=True)
def serve(port, host, data_dir, workers, context_days):
    """Run the HTTP API until interrupted."""
    import uvicorn

    from .service import create_app

    _echo_config({"data_dir": data_dir, "host": host, "port": port,
                  "workers": workers, "context_days": context_days})
    try:
        app = create_app(Workspace(data_dir), context_days=context_days, workers=workers)
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except ForteError as exc:
        _fail(str(exc))
    except OSError as exc:
        _fail(f"cannot bind {host}:{port}: {exc}")
    except SystemExit as exc:
        # uvicorn exits 3 on startup failure (e.g. occupied port)
        if exc.code not in (0, None):
            _fail(f"server failed to start on {host}:{port}")


@main.group()
def experiment():
    """Headless experiment commands."""


@experiment.command("run")
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def experiment_run(spec_file, data_dir, out, workers):
    """Run one experiment synchronously and write results.json + results.csv."""
    try:
        spec = spec_from_dict(json.loads(spec_file.read_text()))
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"{spec_file}: not valid JSON ({exc})")
    except InvalidSpec as exc:
        for field, message in sorted(exc.field_errors.items()):
            click.echo(f"spec error: {field}: {message}", err=True)
        sys.exit(2)
    workspace = Workspace(data_dir)
    try:
        dataset = workspace.load_dataset()
        engine = ExperimentEngine(dataset, workspace.load_models(), workers=workers)
        engine.validate(spec)
    except ForteError as exc:
        click.echo(f"spec error: {exc}", err=True)
        sys.exit(2)
    _echo_config({"data_dir": data_dir, "out": out, "workers": workers,
                  "seed": spec.seed, "name": spec.name})
    last = [-1]

    def on_progress(progress: float) -> None:
        pct = int(progress * 100)
        if pct >= last[0] + 5 or pct == 100:
            last[0] = pct
            click.echo(f"  {pct:3d}%")

    results = engine.run(spec, progress_cb=on_progress)
    if results.status is not ExperimentStatus.COMPLETED:
        _fail(f"experiment {results.status.value}: {results.error}")
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.json").write_text(results_to_json(results))
    (out / "results.csv").write_text(results_to_csv(results))
    click.echo(f"completed: {len(results.records)} records -> {out}")


if __name__ == "__main__":
    main()

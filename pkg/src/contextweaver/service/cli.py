"""Operator CLI: serve, ingest, sweep, snapshot, replay, profiles, seed-demo."""

from __future__ import annotations

import json
import logging
import sys

import click
import uvicorn

from ..demo import build_demo_graph
from ..errors import ContextWeaverError
from ..generation import compute_acceptance
from ..ingest import FixtureFeedAdapter, run_ingest_cycle
from ..kg import load_profile_dir
from .app import create_app
from .config import load_config
from .runtime import Runtime

logger = logging.getLogger(__name__)


def _runtime(config_path):
    return Runtime(load_config(config_path))


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              envvar="CW_CONFIG", help="Path to the YAML config file.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def main(ctx, config_path, verbose):
    """Context-aware messaging service."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path


@main.command()
@click.option("--host", default=None, help="Override listen host.")
@click.option("--port", default=None, type=int, help="Override listen port.")
@click.pass_context
def serve(ctx, host, port):
    """Run the HTTP API with background ingest/sweep/snapshot schedulers."""
    config = load_config(ctx.obj["config_path"])
    if host:
        config.host = host
    if port:
        config.port = port
    runtime = Runtime(config)
    runtime.start_schedulers()
    try:
        uvicorn.run(create_app(runtime), host=config.host, port=config.port,
                    log_level="info")
    finally:
        runtime.close()


@main.command()
@click.option("--fixture", "fixture_path", type=click.Path(exists=True), required=True,
              help="Line-delimited news fixture to ingest.")
@click.pass_context
def ingest(ctx, fixture_path):
    """Run one ingest cycle from a fixture file and persist the result."""
    runtime = _runtime(ctx.obj["config_path"])
    report = run_ingest_cycle(FixtureFeedAdapter(fixture_path), runtime.cache, runtime.kg)
    runtime.snapshot()
    click.echo(json.dumps(report.as_dict(), indent=2))


@main.command()
@click.pass_context
def sweep(ctx):
    """Force one TTL sweep and persist the result."""
    runtime = _runtime(ctx.obj["config_path"])
    report = runtime.sweep_once()
    click.echo(json.dumps(report.as_dict(), indent=2))


@main.command()
@click.pass_context
def snapshot(ctx):
    """Write canonical KG and event-cache snapshots to the data directory."""
    runtime = _runtime(ctx.obj["config_path"])
    paths = runtime.snapshot()
    click.echo(json.dumps(paths, indent=2))


@main.command()
@click.option("--feedback", "feedback_path", type=click.Path(exists=True), required=True,
              help="Feedback log to replay.")
@click.option("--domain", default=None, help="Restrict to one domain.")
def replay(feedback_path, domain):
    """Recompute acceptance metrics from a feedback log."""
    metrics = compute_acceptance(feedback_path, domain_filter=domain)
    click.echo(json.dumps(metrics.as_dict(), indent=2))


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.pass_context
def profiles(ctx, directory):
    """Ingest a directory of person/location profile records."""
    runtime = _runtime(ctx.obj["config_path"])
    count = load_profile_dir(runtime.kg, directory)
    runtime.snapshot()
    click.echo(f"loaded {count} profile records")


@main.command("seed-demo")
@click.pass_context
def seed_demo(ctx):
    """Load the bundled demo graph (John, the Alex pair, a rain event)."""
    runtime = _runtime(ctx.obj["config_path"])
    build_demo_graph(runtime.kg)
    runtime.snapshot()
    click.echo(f"seeded demo graph: {runtime.kg.node_count()} nodes, "
               f"{runtime.kg.edge_count()} edges")


def entrypoint():
    try:
        main(obj={})
    except ContextWeaverError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    entrypoint()

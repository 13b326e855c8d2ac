"""Command line entry point: ``skewps``."""
from __future__ import annotations

import sys

import click
import numpy as np

from . import report as rp
from .config import InstanceConfig, build_datum, load_config
from .crossed import decompose
from .errors import ConfigError, InstanceError, SkewError
from .extension import reduce_to_sfoh
from .series import BoundedSeries
from .suites import REGISTRY

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _load(path: str) -> InstanceConfig:
    try:
        return load_config(path)
    except ConfigError as exc:
        click.echo(f"ConfigError: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _emit(cfg: InstanceConfig, verb: str, payload: dict, out: str | None, quiet_json: bool) -> None:
    text = rp.dumps(payload)
    rp.write_report(text, rp.report_path(cfg, verb, out))
    if not quiet_json:
        click.echo(text, nl=False)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Verification harness for truncated skew power series rings."""


@main.command()
@click.argument("config")
@click.option("--suite", "suites", multiple=True, help="Run only this suite id (repeatable).")
@click.option("--out", default=None, help="Report path (default: $SKEWPS_REPORT_DIR/<id>.verify.json).")
@click.option("--jobs", default=1, show_default=True, help="Worker threads.")
@click.option("--timings", is_flag=True, help="Record wall time per suite (breaks byte determinism).")
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report instead of the summary.")
def verify(config, suites, out, jobs, timings, as_json):
    """Run the selected verification suites of CONFIG."""
    cfg = _load(config)
    try:
        report = rp.run(cfg, list(suites) or None, jobs=jobs, timings=timings)
    except ConfigError as exc:
        click.echo(f"ConfigError: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except InstanceError as exc:
        click.echo(f"InstanceError: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    _emit(cfg, "verify", report, out, not as_json)
    if not as_json:
        click.echo("\n".join(rp.summary_lines(report)))
    sys.exit(EXIT_PASS if report["passed"] else EXIT_FAIL)


@main.command("decompose")
@click.argument("config")
@click.option("--m", "m", type=int, required=True, help="Split over x^(p^m).")
@click.option("--degree", type=int, default=None, help="Degree of the random input (default: x-cap).")
@click.option("--out", default=None)
def decompose_cmd(config, m, degree, out):
    """Decompose a seeded random series of CONFIG over the g-basis and recompose it."""
    cfg = _load(config)
    if m < 0:
        click.echo("ConfigError: --m must be >= 0", err=True)
        sys.exit(EXIT_CONFIG)
    try:
        d = build_datum(cfg)
    except (ConfigError, InstanceError) as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    f = BoundedSeries.random(d, rng, degree=cfg.xcap if degree is None else degree)
    try:
        dec = decompose(f, m)
    except SkewError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    diff = dec.recompose() - f
    payload = {"schema_version": rp.SCHEMA_VERSION, "instance": cfg.id, "seed": cfg.seed, "m": m,
               "input": f.to_json(), "decomposition": dec.to_json(),
               "round_trip_residual": diff.residual_value(), "passed": diff.is_zero()}
    _emit(cfg, "decompose", payload, out, False)
    sys.exit(EXIT_PASS if diff.is_zero() else EXIT_FAIL)


@main.group()
def pipeline():
    """End-to-end pipelines."""


@pipeline.command("sfoh")
@click.argument("config")
@click.option("--out", default=None)
def pipeline_sfoh(config, out):
    """Reduce CONFIG's datum to a unit conjugator over a scalar extension."""
    cfg = _load(config)
    try:
        d = build_datum(cfg)
    except (ConfigError, InstanceError) as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    rng = rp.suite_rngs(cfg.seed)["sfoh-pipeline"]
    try:
        rep = reduce_to_sfoh(d, C=cfg.central_degree, rng=rng, target=cfg.precision)
        payload = rep.to_json()
        passed = rep.passed
    except SkewError as exc:
        payload, passed = {"error": f"{type(exc).__name__}: {exc}", "passed": False}, False
    payload.update({"schema_version": rp.SCHEMA_VERSION, "instance": cfg.id, "seed": cfg.seed})
    _emit(cfg, "sfoh", payload, out, False)
    sys.exit(EXIT_PASS if passed else EXIT_FAIL)


@main.command("list-suites")
def list_suites():
    """Print suite ids with their citation labels."""
    for s in REGISTRY:
        click.echo(f"{s.id}  {s.citation}")


if __name__ == "__main__":
    main()

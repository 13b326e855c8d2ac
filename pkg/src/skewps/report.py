"""Suite execution and deterministic JSON reports."""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import InstanceConfig, build_datum
from .errors import ConfigError, SkewError
from .qelem import INF
from .suites import BY_ID, REGISTRY, SuiteResult

SCHEMA_VERSION = 1
REPORT_DIR_ENV = "SKEWPS_REPORT_DIR"


def suite_rngs(seed: int) -> dict[str, np.random.Generator]:
    """One independent generator per registered suite, fixed by registry position."""
    children = np.random.SeedSequence(seed).spawn(len(REGISTRY))
    return {s.id: np.random.default_rng(c) for s, c in zip(REGISTRY, children)}


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return "inf" if math.isinf(x) else float(x)
    if x is INF:
        return "inf"
    if x is None or isinstance(x, str):
        return x
    return str(x)


def select_suites(cfg: InstanceConfig, only: list[str] | None = None) -> list[str]:
    wanted = list(only) if only else list(cfg.suites) or [s.id for s in REGISTRY]
    unknown = [w for w in wanted if w not in BY_ID]
    if unknown:
        raise ConfigError(f"unknown suite(s): {', '.join(unknown)}", key="select")
    order = {s.id: i for i, s in enumerate(REGISTRY)}
    return sorted(set(wanted), key=order.__getitem__)


def _run_one(cfg: InstanceConfig, sid: str, rng: np.random.Generator, timings: bool) -> dict:
    suite = BY_ID[sid]
    t0 = time.perf_counter()
    try:
        res = suite.run(cfg, rng)
        error = None
    except SkewError as exc:
        res, error = SuiteResult(False), f"{type(exc).__name__}: {exc}"
    rec = {"suite": sid, "citation": suite.citation, "operation": suite.operation, "instance": cfg.id,
           "passed": bool(res.passed), "residuals": res.residuals, "counters": res.counters,
           "details": res.details, "error": error}
    if timings:
        rec["wall_time_s"] = round(time.perf_counter() - t0, 3)
    return rec


def run(cfg: InstanceConfig, only: list[str] | None = None, jobs: int = 1, timings: bool = False) -> dict:
    """Execute the selected suites; records come back sorted by suite id."""
    ids = select_suites(cfg, only)
    build_datum(cfg)  # construction errors surface before any suite runs
    rngs = suite_rngs(cfg.seed)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda sid: _run_one(cfg, sid, rngs[sid], timings), ids))
    else:
        records = [_run_one(cfg, sid, rngs[sid], timings) for sid in ids]
    records.sort(key=lambda r: r["suite"])
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "instance": cfg.id,
            "seed": cfg.seed, "passed": all(r["passed"] for r in records), "records": records}


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def report_path(cfg: InstanceConfig, verb: str, explicit: str | None = None) -> Path | None:
    if explicit:
        return Path(explicit)
    base = os.environ.get(REPORT_DIR_ENV)
    if not base:
        return None
    return Path(base) / f"{cfg.id}.{verb}.json"


def write_report(text: str, path: Path | None) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def summary_lines(report: dict) -> list[str]:
    out = []
    for r in report["records"]:
        status = "PASS" if r["passed"] else "FAIL"
        line = f"{status}  {r['suite']:<24} {r['citation']}"
        if r.get("error"):
            line += f"  [{r['error']}]"
        out.append(line)
    out.append(f"{'PASS' if report['passed'] else 'FAIL'}  {report['instance']}: "
               f"{sum(r['passed'] for r in report['records'])}/{len(report['records'])} suites")
    return out

"""Instance configuration files (TOML) and their translation into skew data."""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, InstanceError, SkewError
from .fields import field as gf_field, is_prime
from .maps import SkewAuto
from .qelem import MatRing, QElem
from .skew import SkewDatum

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class InstanceConfig:
    id: str
    p: int
    k: int = 1
    s: int = 1
    precision: int = 16
    guard: int = 0
    xcap: int = 32
    frobenius: int = 0
    conjugator: str | None = None
    t: str = "-1"
    seed: int = 0
    suites: tuple[str, ...] = ()
    central_degree: int | None = None
    decompose_m: int = 1
    alpha: int | None = None
    fd_presets: tuple[str, ...] = ()
    samples: dict = field(default_factory=dict)
    source: str = ""

    @property
    def working_precision(self) -> int:
        return self.precision + self.guard


def _line_of(text: str, key: str) -> int | None:
    for n, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*=", line):
            return n
    return None


def _get(tbl: dict, key: str, typ, default, text: str, required: bool = False):
    if key not in tbl:
        if required:
            raise ConfigError("missing required key", key=key)
        return default
    val = tbl[key]
    if typ is int and isinstance(val, bool) or not isinstance(val, typ):
        raise ConfigError(f"expected {typ.__name__}, got {type(val).__name__}", key=key, line=_line_of(text, key))
    return val


def load_config(path: str | Path) -> InstanceConfig:
    path = Path(path)
    if not path.exists() and (FIXTURE_DIR / path.name).exists():
        path = FIXTURE_DIR / path.name
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text, source=str(path))


def parse_config(text: str, source: str = "<string>") -> InstanceConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"TOML syntax error: {exc}", line=int(m.group(1)) if m else None) from None
    inst = data.get("instance")
    if not isinstance(inst, dict):
        raise ConfigError("missing [instance] table", key="instance")
    p = _get(inst, "p", int, None, text, required=True)
    if p < 2 or not is_prime(p):
        raise ConfigError("p not prime", key="p", line=_line_of(text, "p"))
    k = _get(inst, "k", int, 1, text)
    s = _get(inst, "s", int, 1, text)
    N = _get(inst, "precision", int, 16, text)
    M = _get(inst, "xcap", int, 32, text)
    if k < 1 or s < 1:
        raise ConfigError("k and s must be positive", key="k" if k < 1 else "s")
    if N < 1 or M < 1:
        raise ConfigError("precision and xcap must be at least 1", key="precision" if N < 1 else "xcap")
    sigma = inst.get("sigma", {})
    if not isinstance(sigma, dict):
        raise ConfigError("sigma must be a table", key="sigma")
    ext = data.get("extension", {})
    suites = data.get("suites", {})
    fd = data.get("fd", {})
    sel = _get(suites, "select", list, [], text)
    presets = _get(fd, "presets", list, [], text)
    t = inst.get("t", "-1")
    if not isinstance(t, str):
        raise ConfigError("t must be a string", key="t", line=_line_of(text, "t"))
    return InstanceConfig(
        id=_get(inst, "id", str, Path(source).stem, text),
        p=p, k=k, s=s, precision=N,
        guard=_get(inst, "guard", int, 0, text),
        xcap=M,
        frobenius=_get(sigma, "frobenius", int, 0, text),
        conjugator=_get(sigma, "conjugator", str, None, text),
        t=t,
        seed=_get(inst, "seed", int, 0, text),
        suites=tuple(str(x) for x in sel),
        central_degree=_get(ext, "central_degree", int, None, text),
        decompose_m=_get(suites, "decompose_m", int, 1, text),
        alpha=_get(inst, "alpha", int, None, text),
        fd_presets=tuple(str(x) for x in presets),
        samples=dict(data.get("samples", {})),
        source=source,
    )


def build_ring(cfg: InstanceConfig) -> MatRing:
    return MatRing(gf_field(cfg.p, cfg.k), cfg.s, cfg.working_precision)


def parse_element(text: str, ring: MatRing) -> QElem:
    text = text.strip()
    neg = text.startswith("-")
    body = text[1:].strip() if neg else text
    try:
        q = ring.parse(body)
    except (ValueError, SkewError) as exc:
        raise ConfigError(f"cannot parse element {text!r}: {exc}") from None
    return -q if neg else q


def build_datum(cfg: InstanceConfig) -> SkewDatum:
    R = build_ring(cfg)
    conj = parse_element(cfg.conjugator, R) if cfg.conjugator else None
    try:
        sigma = SkewAuto(R, cfg.frobenius, conj)
    except SkewError as exc:
        raise InstanceError(f"sigma: {exc}") from None
    t = parse_element(cfg.t, R)
    try:
        return SkewDatum(R, sigma, t, xcap=cfg.xcap, name=cfg.id)
    except SkewError as exc:
        raise InstanceError(f"sigma(t) = t violated: {exc}") from None


def fixture_path(name: str) -> Path:
    path = FIXTURE_DIR / (name if name.endswith(".toml") else name + ".toml")
    if not path.exists():
        raise ConfigError(f"unknown fixture {name!r}")
    return path


def list_fixtures() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.toml"))

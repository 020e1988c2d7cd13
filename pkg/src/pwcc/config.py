"""Run configuration: a TOML document with ``[potential]``, ``[space]`` and ``[run]`` tables.

::

    [potential]
    kind = "hard_sphere"
    r = 1.0

    [space]
    d = 2
    norm = "l2"

    [run]
    seed = 42
    samples = 1000000

Relative paths (a radial table CSV, output files) resolve against the
directory of the config file. Unknown keys are errors.
"""

from __future__ import annotations

import os
import re
import secrets
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ._blocks import default_workers
from .errors import ConfigError
from .geometry import Norm, Space
from .potentials import Potential, from_config

SEED_ENV = "CONNECTIVE_SEED"
DEFAULT_CONFIDENCE = 0.99
FORMATS = ("json", "csv", "jsonl")

RUN_KEYS = {
    "seed", "workers", "confidence", "out", "format",
    # vk-estimate / delta-bound / threshold
    "k", "samples", "method",
    # fixed-point / contraction
    "lambda", "c_phi", "sweep", "tau1", "tau2", "kmax",
    # sample-gibbs / verify
    "box", "boundary", "n", "identity", "v", "points", "reps", "quad_nodes",
}
SPACE_KEYS = {"d", "norm"}
SECTIONS = {"potential", "space", "run"}


@dataclass
class RunConfig:
    potential: Potential | None
    space: Space | None
    params: dict
    seed: int
    seed_source: str
    workers: int
    confidence: float = DEFAULT_CONFIDENCE
    out: Path | None = None
    format: str = "json"
    base_dir: Path = field(default_factory=Path.cwd)
    source: Path | None = None
    raw: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.params.get(key, default)

    def echo(self) -> dict:
        """Resolved configuration, suitable for a manifest."""
        return {
            "potential": self.potential.to_config() if self.potential is not None else None,
            "space": ({"d": self.space.dimension, "norm": self.space.norm.value}
                      if self.space is not None else None),
            "run": {**self.params, "seed": self.seed, "workers": self.workers,
                    "confidence": self.confidence, "format": self.format,
                    "out": str(self.out) if self.out is not None else None},
            "seed_source": self.seed_source,
        }


def _line_of(text: str, section: str, key: str | None) -> int | None:
    """1-based line of ``key`` inside ``[section]`` (or of the header when ``key`` is None)."""
    if not text:
        return None
    current = None
    for no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        m = re.match(r"\[\s*([A-Za-z0-9_.-]+)\s*\]", stripped)
        if m:
            current = m.group(1)
            if key is None and current == section:
                return no
            continue
        m = re.match(r"([A-Za-z0-9_-]+)\s*=", stripped)
        if m and current == section and m.group(1) == key:
            return no
        if m and current is None and m.group(1) == section:
            return no  # inline table form: potential = { ... }
    return None


def load_toml(path) -> tuple[dict, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        return tomllib.loads(text), text
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"malformed config: {exc}", line=int(m.group(1)) if m else None) from exc


def parse_config(path=None, overrides: dict | None = None, env=None) -> RunConfig:
    """Build a validated :class:`RunConfig` from a file and/or flag ``overrides``.

    ``overrides`` has the same shape as the file (``{"potential": {...},
    "space": {...}, "run": {...}}``) and wins key by key.
    """
    env = os.environ if env is None else env
    data, text = ({}, "") if path is None else load_toml(path)
    base_dir = Path(path).resolve().parent if path is not None else Path.cwd()
    for section in data:
        if section not in SECTIONS:
            raise ConfigError(f"unknown section {section!r}", field=section,
                              line=_line_of(text, section, None))
        if not isinstance(data[section], dict):
            raise ConfigError(f"{section!r} must be a table", field=section,
                              line=_line_of(text, section, None))
    merged = {s: dict(data.get(s, {})) for s in SECTIONS}
    for s, block in (overrides or {}).items():
        merged[s].update({k: v for k, v in block.items() if v is not None})

    def fail(msg, section, key=None):
        raise ConfigError(msg, field=f"{section}.{key}" if key else section,
                          line=_line_of(text, section, key))

    run = merged["run"]
    for key in run:
        if key not in RUN_KEYS:
            fail(f"unknown key {key!r}", "run", key)

    space = None
    if merged["space"]:
        for key in merged["space"]:
            if key not in SPACE_KEYS:
                fail(f"unknown key {key!r}", "space", key)
        if "d" not in merged["space"]:
            fail("space needs 'd'", "space", "d")
        d = merged["space"]["d"]
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            fail(f"dimension must be a positive integer, got {d!r}", "space", "d")
        norm = merged["space"].get("norm", "l2")
        if norm not in {n.value for n in Norm}:
            fail(f"norm must be one of 'l2', 'linf', got {norm!r}", "space", "norm")
        space = Space(d, Norm(norm))

    potential = None
    if merged["potential"]:
        try:
            potential = from_config(merged["potential"], base_dir=base_dir)
        except KeyError as exc:
            m = re.search(r"\[?'([A-Za-z_]+)'", str(exc))
            fail(str(exc.args[0]) if exc.args else str(exc), "potential", m.group(1) if m else None)
        except (ValueError, OSError) as exc:
            key = "kind" if "kind" in str(exc) else None
            fail(str(exc), "potential", key)

    seed, source = run.get("seed"), "config"
    if overrides and (overrides.get("run") or {}).get("seed") is not None:
        source = "flag"
    if env.get(SEED_ENV):
        try:
            seed, source = int(env[SEED_ENV]), "env"
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer", field=SEED_ENV) from None
    if seed is None:
        seed, source = secrets.randbits(63), "random"
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2 ** 64:
        fail(f"seed must be a 64-bit non-negative integer, got {seed!r}", "run", "seed")

    workers = run.get("workers", default_workers())
    if not isinstance(workers, int) or workers < 1:
        fail(f"workers must be a positive integer, got {workers!r}", "run", "workers")
    confidence = run.get("confidence", DEFAULT_CONFIDENCE)
    if not isinstance(confidence, (int, float)) or not 0 < confidence < 1:
        fail(f"confidence must lie in (0, 1), got {confidence!r}", "run", "confidence")

    out = run.get("out")
    fmt = run.get("format")
    if out is not None:
        out = Path(out)
        if not out.is_absolute():
            out = base_dir / out
        if fmt is None:
            fmt = out.suffix.lstrip(".").lower() or "json"
    fmt = fmt or "json"
    if fmt not in FORMATS:
        fail(f"format must be one of {FORMATS}, got {fmt!r}", "run", "format")

    params = {k: v for k, v in run.items()
              if k not in {"seed", "workers", "confidence", "out", "format"}}
    return RunConfig(potential=potential, space=space, params=params, seed=seed,
                     seed_source=source, workers=workers, confidence=float(confidence),
                     out=out, format=fmt, base_dir=base_dir,
                     source=Path(path).resolve() if path is not None else None, raw=data)

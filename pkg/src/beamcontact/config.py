"""Sectioned ``key = value`` experiment files.

Sections are ``[beam]``, ``[spring]``, ``[excitation]``, ``[sweep]`` and
``[run]``. Every key is optional except ``run.kind`` (which the CLI
supplies from the subcommand); omitted keys take the defaults of the
published experiments for that run kind. ``format_config`` writes a fully
resolved file that parses back to an equal config.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, fields

from .dynamics import default_dt
from .fem import BeamProperties, assemble
from .springs import Excitation, SpringConfig, SpringMode
from .sweep import SweepConfig

KINDS = ("modal", "simulate", "fft", "sweep")
IC_PRESETS = ("rest", "released")
AUTO = "auto"


class ConfigError(ValueError):
    def __init__(self, message, section=None, key=None, line=None):
        where = ""
        if section is not None:
            where = f"[{section}]" + (f" {key}" if key else "")
            if line is not None:
                where += f" (line {line})"
            where += ": "
        super().__init__(where + message)
        self.section = section
        self.key = key
        self.line = line


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _int(text):
    return int(text.strip())


def _float(text):
    return float(text.strip())


def _opt(conv):
    def parse(text):
        return None if text.strip().lower() == AUTO else conv(text)

    return parse


def _choice(options):
    def parse(text):
        t = text.strip().lower()
        if t not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return t

    return parse


SCHEMA = {
    "beam": {"E": _float, "I": _float, "rho": _float, "S": _float, "L": _float, "n_elements": _int},
    "spring": {"mode": _choice([m.value for m in SpringMode]), "k_r": _float, "node": _int},
    "excitation": {"enabled": _bool, "a": _float, "f": _float},
    "sweep": {"f0": _float, "f1": _float, "df": _float, "a": _float, "tf": _float},
    "run": {
        "kind": _choice(KINDS),
        "t_end": _float,
        "dt": _opt(_float),
        "output_every": _int,
        "ic": _choice(IC_PRESETS),
        "ic_amplitude": _float,
        "modes": _int,
        "input": str.strip,
        "dof": _opt(_int),
        "threshold": _float,
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    beam: BeamProperties = field(default_factory=BeamProperties)
    n_elements: int = 2
    spring: SpringConfig = field(default_factory=lambda: SpringConfig.at_middle(2))
    excitation: Excitation = field(default_factory=Excitation)
    f0: float = 100.0
    f1: float = 1000.0
    df: float = 5.0
    sweep_a: float = 50.0
    tf: float = 0.1
    t_end: float = 1.0
    dt: float | None = None
    output_every: int = 16
    ic: str = "rest"
    ic_amplitude: float = 0.4
    modes: int = 3
    input: str = "timeseries.csv"
    dof: int | None = None
    threshold: float = 0.05

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(
            f0=self.f0, f1=self.f1, df=self.df, a=self.sweep_a, tf=self.tf,
            spring=self.spring, n_elements=self.n_elements, dt=self.dt,
        )


def _line_index(text):
    """(section, key) -> 1-based line number of its definition."""
    index = {}
    section = None
    for n, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            index[(section, None)] = n
            continue
        m = re.match(r"([^=:]+?)\s*[=:]", s)
        if m and section is not None:
            index[(section, m.group(1))] = n
    return index


def _read_raw(text):
    parser = configparser.ConfigParser(interpolation=None, strict=True, default_section="__defaults__")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError("duplicate key", exc.section, exc.option, exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError("duplicate section", exc.section, None, exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside of any section", line=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError(f"cannot parse line {lineno}", line=lineno) from None
    return {s: dict(parser.items(s)) for s in parser.sections()}


def parse_config(text: str, kind: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Parse, validate and resolve an experiment file.

    ``overrides`` maps ``(section, key)`` to a string value and wins over
    the file (this is how CLI flags are applied). ``kind`` is used when
    the file has no ``run.kind``.
    """
    lines = _line_index(text)
    raw = _read_raw(text)
    for (section, key), value in (overrides or {}).items():
        raw.setdefault(section, {})[key] = value

    values = {}
    for section, items in raw.items():
        if section not in SCHEMA:
            raise ConfigError("unknown section", section, None, lines.get((section, None)))
        for key, text_value in items.items():
            line = lines.get((section, key))
            if overrides and (section, key) in overrides:
                line = None
            if key not in SCHEMA[section]:
                raise ConfigError("unknown key", section, key, line)
            try:
                values[section, key] = (SCHEMA[section][key](text_value), line)
            except ValueError as exc:
                raise ConfigError(f"invalid value: {exc}", section, key, line) from None

    if ("run", "kind") not in values:
        if kind is None:
            raise ConfigError("missing required key", "run", "kind")
        values["run", "kind"] = (kind, None)
    return _resolve(values)


def _resolve(values):
    def get(section, key, default):
        return values[section, key][0] if (section, key) in values else default

    def fail(message, section, key):
        line = values.get((section, key), (None, None))[1]
        raise ConfigError(message, section, key, line)

    def build(section, key, factory):
        try:
            return factory()
        except ValueError as exc:
            fail(str(exc), section, key)

    kind = get("run", "kind", None)
    d = BeamProperties()
    for key in ("E", "I", "rho", "S", "L"):
        if get("beam", key, 1.0) <= 0:
            fail("must be strictly positive", "beam", key)
    beam = BeamProperties(**{k: get("beam", k, getattr(d, k)) for k in ("E", "I", "rho", "S", "L")})

    n = get("beam", "n_elements", 10 if kind == "modal" else 2)
    if n < 2:
        fail("no free DOFs: a clamped-clamped beam needs n_elements >= 2", "beam", "n_elements")

    mode = get("spring", "mode", "none" if kind == "modal" else "unilateral")
    node = get("spring", "node", n // 2)
    if not 1 <= node <= n - 1:
        fail(f"spring node must be interior (1..{n - 1}), got {node}", "spring", "node")
    k_r = get("spring", "k_r", 1.0e6)
    spring = build("spring", "k_r", lambda: SpringConfig(k_r=k_r, node=node, mode=mode))

    enabled = get("excitation", "enabled", True)
    exc = build(
        "excitation", "f",
        lambda: Excitation(a=get("excitation", "a", 50.0), f=get("excitation", "f", 500.0), enabled=enabled),
    )

    kw = dict(
        kind=kind, beam=beam, n_elements=n, spring=spring, excitation=exc,
        f0=get("sweep", "f0", 100.0), f1=get("sweep", "f1", 1000.0), df=get("sweep", "df", 5.0),
        sweep_a=get("sweep", "a", 50.0), tf=get("sweep", "tf", 0.1),
        t_end=get("run", "t_end", 1.0), dt=get("run", "dt", None),
        output_every=get("run", "output_every", 16), ic=get("run", "ic", "rest"),
        ic_amplitude=get("run", "ic_amplitude", 0.4), modes=get("run", "modes", 3),
        input=get("run", "input", "timeseries.csv"), dof=get("run", "dof", None),
        threshold=get("run", "threshold", 0.05),
    )
    cfg = ExperimentConfig(**kw)
    build("sweep", "df", cfg.sweep_config)
    if cfg.t_end < 0:
        fail("must be >= 0", "run", "t_end")
    if cfg.dt is not None and not cfg.dt > 0:
        fail("must be positive", "run", "dt")
    if cfg.output_every < 1:
        fail("must be >= 1", "run", "output_every")
    if cfg.modes < 1:
        fail("must be >= 1", "run", "modes")
    if not 0 < cfg.threshold <= 1:
        fail("must be in (0, 1]", "run", "threshold")

    if cfg.dt is None and kind in ("simulate", "sweep"):
        sys = assemble(beam, n)
        cfg = _replace(cfg, dt=default_dt(sys, spring))
    return cfg


def _replace(cfg, **changes):
    kw = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    kw.update(changes)
    return ExperimentConfig(**kw)


def _fmt(value):
    if value is None:
        return AUTO
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(cfg: ExperimentConfig) -> str:
    """Fully resolved text form; ``parse_config`` of it gives back ``cfg``."""
    sections = {
        "run": {
            "kind": cfg.kind, "t_end": cfg.t_end, "dt": cfg.dt, "output_every": cfg.output_every,
            "ic": cfg.ic, "ic_amplitude": cfg.ic_amplitude, "modes": cfg.modes,
            "input": cfg.input, "dof": cfg.dof, "threshold": cfg.threshold,
        },
        "beam": {
            "E": cfg.beam.E, "I": cfg.beam.I, "rho": cfg.beam.rho, "S": cfg.beam.S, "L": cfg.beam.L,
            "n_elements": cfg.n_elements,
        },
        "spring": {"mode": cfg.spring.mode.value, "k_r": cfg.spring.k_r, "node": cfg.spring.node},
        "excitation": {"enabled": cfg.excitation.enabled, "a": cfg.excitation.a, "f": cfg.excitation.f},
        "sweep": {"f0": cfg.f0, "f1": cfg.f1, "df": cfg.df, "a": cfg.sweep_a, "tf": cfg.tf},
    }
    out = []
    for name, items in sections.items():
        out.append(f"[{name}]")
        out.extend(f"{k} = {_fmt(v)}" for k, v in items.items())
        out.append("")
    return "\n".join(out)

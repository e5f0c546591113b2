"""Run configuration: an INI file with one flat section per parameter group.

Physical quantities carry their unit in the key name (``_db``, ``_km``,
``_bps_hz``).  dB values are converted to linear exactly once, when the
typed parameter objects are built.

Example::

    [channel]
    sigma = 1.0
    rho = 0.5
    m = 10.0
    k_factor_db = 10.0
    oma_k_factor_db = 10.0
    oma_m = 10.0

    [sweep]
    variable = p_bar_db
    start = 0.0
    stop = 40.0
    points = 9
"""
from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .bivariate import BivariateShadowedParams, TruncationOrders
from .geometry import GeometryParams
from .montecarlo import SimPlan
from .outage import LinkConfig
from .univariate import UnivariateShadowedParams

__all__ = [
    "ChannelSection",
    "GeometrySection",
    "LinkSection",
    "TruncationSection",
    "SimSection",
    "SweepSection",
    "RunConfig",
    "SWEEP_VARIABLES",
]

SWEEP_VARIABLES = ("p_bar_db", "m_bar", "beta", "a_gs1", "rho")


@dataclass(frozen=True)
class ChannelSection:
    sigma: float = 1.0
    rho: float = 0.5
    m: float = 10.0
    k_factor_db: float = 10.0
    oma_k_factor_db: float = 10.0
    oma_m: float = 10.0


@dataclass(frozen=True)
class GeometrySection:
    r_a_km: float = 4.0
    d_alt_km: float = 0.2
    lambda_1_km: float = 2.0
    lambda_2_km: float = 3.0


@dataclass(frozen=True)
class LinkSection:
    a_gs1: float = 0.5
    beta: float = 0.01
    r_oma_bps_hz: float = 0.1
    p_g1_db: float = 10.0
    p_g2_db: float = 10.0


@dataclass(frozen=True)
class TruncationSection:
    ktr1: int = 30
    ktr2: int = 10
    # outer order for the PDF comparison grid
    pdf_ktr1: int = 150
    # raise the truncation where the series validity flag fires
    escalate: bool = True


@dataclass(frozen=True)
class SimSection:
    samples: int = 1_000_000
    seed: int = 2019
    batch_size: int = 1 << 17
    antithetic: bool = False


@dataclass(frozen=True)
class SweepSection:
    variable: str = "p_bar_db"
    start: float = 0.0
    stop: float = 40.0
    points: int = 9
    # explicit grid; overrides start/stop/points when non-empty
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if self.values:
            v = self.values
            if len(v) < 2 or any(b <= a for a, b in zip(v, v[1:])):
                raise ValueError("explicit sweep values need at least 2 strictly increasing entries")
        else:
            if self.points < 2:
                raise ValueError("sweep needs at least 2 points")
            if not self.start < self.stop:
                raise ValueError("sweep start must be < stop")

    def grid(self):
        if self.values:
            return [float(v) for v in self.values]
        return [float(v) for v in np.linspace(self.start, self.stop, self.points)]


_SECTIONS = (
    ("channel", "channel", ChannelSection),
    ("geometry", "geometry", GeometrySection),
    ("link", "link", LinkSection),
    ("truncation", "truncation", TruncationSection),
    ("sim", "sim", SimSection),
    ("sweep", "sweep", SweepSection),
)


def _parse_value(kind, text, key):
    text = text.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if kind is str:
            return text
        # tuple of floats
        return tuple(float(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise ValueError(f"cannot parse {key} = {text!r}") from None


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    return str(value)


_TYPES = {"float": float, "int": int, "bool": bool, "str": str}


def _field_kind(f):
    t = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
    return _TYPES.get(t, tuple)


@dataclass(frozen=True)
class RunConfig:
    """Complete run description; defaults reproduce the reference parameter table."""

    channel: ChannelSection = field(default_factory=ChannelSection)
    geometry: GeometrySection = field(default_factory=GeometrySection)
    link: LinkSection = field(default_factory=LinkSection)
    truncation: TruncationSection = field(default_factory=TruncationSection)
    sim: SimSection = field(default_factory=SimSection)
    sweep: SweepSection = field(default_factory=SweepSection)

    def __post_init__(self):
        # build every typed object once so invalid input fails before any computation
        self.bivariate()
        self.univariate()
        self.geometry_params()
        self.link_config()
        self.trunc()
        self.sim_plan()

    # typed views -------------------------------------------------------
    def bivariate(self) -> BivariateShadowedParams:
        c = self.channel
        return BivariateShadowedParams.from_db(c.k_factor_db, sigma=c.sigma, rho=c.rho, m=c.m)

    def univariate(self) -> UnivariateShadowedParams:
        return UnivariateShadowedParams.from_db(self.channel.oma_k_factor_db, self.channel.oma_m)

    def geometry_params(self) -> GeometryParams:
        g = self.geometry
        return GeometryParams(g.r_a_km, g.d_alt_km, g.lambda_1_km, g.lambda_2_km)

    def link_config(self) -> LinkConfig:
        k = self.link
        return LinkConfig.from_db(k.p_g1_db, k.p_g2_db, a_gs1=k.a_gs1, beta=k.beta, r_oma=k.r_oma_bps_hz)

    def trunc(self) -> TruncationOrders:
        return TruncationOrders(self.truncation.ktr1, self.truncation.ktr2)

    def sim_plan(self) -> Optional[SimPlan]:
        s = self.sim
        if s.samples < 0:
            raise ValueError("samples must be >= 0")
        if s.samples == 0:
            return None
        return SimPlan(s.samples, s.seed, min(s.batch_size, s.samples), s.antithetic)

    # sweeps ------------------------------------------------------------
    def at(self, variable: str, value: float) -> "RunConfig":
        """Copy with one sweep variable set."""
        if variable == "p_bar_db":
            return replace(self, link=replace(self.link, p_g1_db=value, p_g2_db=value))
        if variable == "m_bar":
            return replace(self, channel=replace(self.channel, m=value, oma_m=value))
        if variable == "beta":
            return replace(self, link=replace(self.link, beta=value))
        if variable == "a_gs1":
            return replace(self, link=replace(self.link, a_gs1=value))
        if variable == "rho":
            return replace(self, channel=replace(self.channel, rho=value))
        raise ValueError(f"unknown sweep variable {variable!r}")

    def with_overrides(self, samples=None, seed=None) -> "RunConfig":
        sim = self.sim
        if samples is not None:
            sim = replace(sim, samples=int(samples))
        if seed is not None:
            sim = replace(sim, seed=int(seed))
        return replace(self, sim=sim)

    # (de)serialization -------------------------------------------------
    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.read_string(text)
        unknown = set(parser.sections()) - {name for name, _, _ in _SECTIONS}
        if unknown:
            raise ValueError(f"unknown config section(s): {sorted(unknown)}")
        kwargs = {}
        for name, attr, section_cls in _SECTIONS:
            values = {}
            if parser.has_section(name):
                fields = {f.name: f for f in dataclasses.fields(section_cls)}
                for key, raw in parser.items(name):
                    if key not in fields:
                        raise ValueError(f"unknown key [{name}] {key}")
                    values[key] = _parse_value(_field_kind(fields[key]), raw, f"[{name}] {key}")
            kwargs[attr] = section_cls(**values)
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_ini(fh.read())

    def to_ini(self) -> str:
        parser = configparser.ConfigParser(interpolation=None)
        for name, attr, section_cls in _SECTIONS:
            section = getattr(self, attr)
            parser[name] = {f.name: _format_value(getattr(section, f.name)) for f in dataclasses.fields(section_cls)}
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_ini())

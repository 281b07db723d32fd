"""Run configuration: an INI file with [kernel], [initial], [scheme], [sweep]
and [stability] sections, plus ``section.key=value`` overrides."""
from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ConfigError
from .exact import CosineMode, GaussianBump, InitialData, LaplaceBump, SingleMode
from .kernels import InfiniteKernel, PeriodicKernel, cosine_kernel, periodize

KERNEL_FAMILIES = ("gaussian", "laplace", "cosine")
INITIAL_FAMILIES = ("gaussian_bump", "laplace_bump", "single_mode", "cosine_mode")


def parse_float(text) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text!r}") from None


def parse_list(text, item=parse_float) -> list:
    if isinstance(text, (list, tuple)):
        return [item(t) for t in text]
    return [item(t) for t in str(text).split(",") if t.strip()]


def parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def parse_int(text) -> int:
    v = parse_float(text)
    if v != int(v):
        raise ConfigError(f"not an integer: {text!r}")
    return int(v)


@dataclass
class KernelConfig:
    family: str = "gaussian"
    c: float = 10.0
    n_points: int = 64
    tail_tol: float = 1e-14
    amplitude: float = 1.0
    mode: int = 2

    def infinite(self) -> InfiniteKernel:
        if self.family == "gaussian":
            return InfiniteKernel.gaussian(self.c)
        if self.family == "laplace":
            return InfiniteKernel.laplace(self.c)
        raise ConfigError(f"kernel family {self.family!r} has no infinite-line form")

    def build(self, n_points: Optional[int] = None) -> PeriodicKernel:
        n = n_points or self.n_points
        if self.family == "cosine":
            return cosine_kernel(n, self.amplitude, self.mode)
        return periodize(self.infinite(), n, self.tail_tol)


@dataclass
class InitialConfig:
    family: str = "gaussian_bump"
    a: float = 1.0
    center: float = 0.5
    k: int = 1
    amplitude: float = 1.0

    def build(self, family: Optional[str] = None) -> InitialData:
        fam = family or self.family
        if fam == "gaussian_bump":
            return GaussianBump(self.a, self.center)
        if fam == "laplace_bump":
            return LaplaceBump(self.center)
        if fam == "single_mode":
            return SingleMode(self.k, self.amplitude)
        if fam == "cosine_mode":
            return CosineMode(self.k, self.amplitude)
        raise ConfigError(f"unknown initial family {fam!r}; choose from {INITIAL_FAMILIES}")


@dataclass
class SchemeSection:
    n_points: int = 0  # 0: use kernel.n_points
    dt: float = 0.5
    n_steps: int = 200
    snapshot_every: int = 10
    allow_blowup: bool = False
    method: str = "direct"


@dataclass
class SweepConfig:
    t_final: float = 1.0
    grids: list = field(default_factory=lambda: [32, 64, 128, 256])
    dts: list = field(default_factory=lambda: [1 / 64, 1 / 128, 1 / 256, 1 / 512, 1 / 1024])
    families: list = field(default_factory=lambda: ["gaussian_bump"])
    jobs: int = 1


@dataclass
class StabilityConfig:
    probe_factors: list = field(default_factory=lambda: [0.5, 0.9, 1.0, 1.1, 1.25])
    probe_dts: list = field(default_factory=list)
    n_steps: int = 200


@dataclass
class RunConfig:
    kernel: KernelConfig = field(default_factory=KernelConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    scheme: SchemeSection = field(default_factory=SchemeSection)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    stability: StabilityConfig = field(default_factory=StabilityConfig)

    @property
    def n_points(self) -> int:
        return self.scheme.n_points or self.kernel.n_points

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


_PARSERS = {
    ("kernel", "family"): str, ("kernel", "c"): parse_float, ("kernel", "n_points"): parse_int,
    ("kernel", "tail_tol"): parse_float, ("kernel", "amplitude"): parse_float, ("kernel", "mode"): parse_int,
    ("initial", "family"): str, ("initial", "a"): parse_float, ("initial", "center"): parse_float,
    ("initial", "k"): parse_int, ("initial", "amplitude"): parse_float,
    ("scheme", "n_points"): parse_int, ("scheme", "dt"): parse_float, ("scheme", "n_steps"): parse_int,
    ("scheme", "snapshot_every"): parse_int, ("scheme", "allow_blowup"): parse_bool, ("scheme", "method"): str,
    ("sweep", "t_final"): parse_float, ("sweep", "grids"): lambda v: parse_list(v, parse_int),
    ("sweep", "dts"): parse_list, ("sweep", "families"): lambda v: parse_list(v, lambda s: str(s).strip()),
    ("sweep", "jobs"): parse_int,
    ("stability", "probe_factors"): parse_list, ("stability", "probe_dts"): parse_list,
    ("stability", "n_steps"): parse_int,
}


def _apply(cfg: RunConfig, section: str, key: str, value) -> None:
    parser = _PARSERS.get((section, key))
    if parser is None:
        raise ConfigError(f"unknown config key {section}.{key}")
    setattr(getattr(cfg, section), key, parser(value))


def _validate(cfg: RunConfig) -> RunConfig:
    if cfg.kernel.family not in KERNEL_FAMILIES:
        raise ConfigError(f"unknown kernel family {cfg.kernel.family!r}; choose from {KERNEL_FAMILIES}")
    for fam in [cfg.initial.family, *cfg.sweep.families]:
        if fam not in INITIAL_FAMILIES:
            raise ConfigError(f"unknown initial family {fam!r}; choose from {INITIAL_FAMILIES}")
    if cfg.n_points % 2 or cfg.n_points < 4:
        raise ConfigError(f"grid size must be an even integer >= 4, got {cfg.n_points}")
    if any(n % 2 or n < 4 for n in cfg.sweep.grids):
        raise ConfigError(f"sweep grids must be even integers >= 4: {cfg.sweep.grids}")
    if cfg.scheme.dt <= 0 or any(d <= 0 for d in cfg.sweep.dts):
        raise ConfigError("time steps must be positive")
    if cfg.scheme.method not in ("direct", "fft"):
        raise ConfigError(f"unknown scheme method {cfg.scheme.method!r}")
    return cfg


def load_config(path: Optional[str] = None, overrides: Sequence[str] = ()) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        ini = configparser.ConfigParser()
        try:
            with open(path, encoding="utf-8") as fh:
                ini.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        for section in ini.sections():
            if section not in {f.name for f in fields(RunConfig)}:
                raise ConfigError(f"unknown config section [{section}]")
            for key, value in ini.items(section):
                _apply(cfg, section, key, value)
    for item in overrides:
        lhs, sep, value = item.partition("=")
        section, dot, key = lhs.strip().partition(".")
        if not sep or not dot:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        _apply(cfg, section, key, value.strip())
    return _validate(cfg)

"""Run configuration: a line-oriented `section.key = value` format.

Example::

    grid.n = 4096
    grid.length = 400
    model.alpha = -1
    model.gamma = -1
    integrator.dt = 1e-3
    integrator.t_final = 10
    initial.kind = gaussian
    output.figures = conserved, masses

Blank lines and `#` comments are ignored.  Unknown keys are rejected with
their line number; constraint violations are reported with the key path and
the violated inequality.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields as dc_fields

from .grid import GridError, make_grid
from .model import ModelError, ModelParams
from .integrate import IntegratorOptions
from .monitor import RegionError, RegionSpec
from .virial import VirialConfig, VirialConfigError


class ConfigError(ValueError):
    pass


@dataclass
class GridBlock:
    n: int = 4096
    length: float = 400.0
    center: float = 0.0


@dataclass
class ModelBlock:
    alpha: float = -1.0
    beta: float = 1.0
    gamma: float = -1.0


@dataclass
class IntegratorBlock:
    dt: float = 1e-3
    t_final: float = 10.0
    scheme: str = "strang"
    dealias: bool = True
    sponge_width: float = 0.0
    sponge_strength: float = 0.0


@dataclass
class InitialBlock:
    kind: str = "gaussian"
    # gaussian kind: u = amp_u exp(-((x-center_u)/width_u)^2) e^{i(k0 x + phase)},
    #                v = amp_v sech^2((x-center_v)/width_v)
    amp_u: float = 1.0
    width_u: float = 1.0
    center_u: float = 0.0
    k0: float = 0.0
    phase: float = 0.0
    amp_v: float = 1.0
    width_v: float = 1.0
    center_v: float = 0.0
    # soliton kind
    cstar: float = 1.0
    x0: float = 0.0
    kdv_only: bool = False
    # snapshot kind
    path: str = ""
    # expression kind (numpy expressions of x)
    u_expr: str = "0"
    v_expr: str = "0"


@dataclass
class VirialBlock:
    p1: float = 0.5
    p2: float = 2.0
    q1: float = 1.0
    a: float = 2.0
    b: float = 2.0
    l: float = 1.0
    theta: float = 1.0
    mu: str = "auto"  # "auto" -> gamma*theta/alpha, else a float literal
    m: float = 0.6


@dataclass
class MonitorBlock:
    sample_dt: float = 0.1
    t_start: float = 2.0
    prefactor: float = 1.0
    centered: bool = True
    ray: bool = False


@dataclass
class OutputBlock:
    directory: str = "out"
    snapshot_times: list = field(default_factory=list)
    figures: list = field(default_factory=list)
    checkpoint_cadence: float = 0.0  # simulated-time units; 0 = final only


@dataclass
class RunConfig:
    grid: GridBlock = field(default_factory=GridBlock)
    model: ModelBlock = field(default_factory=ModelBlock)
    integrator: IntegratorBlock = field(default_factory=IntegratorBlock)
    initial: InitialBlock = field(default_factory=InitialBlock)
    virial: VirialBlock = field(default_factory=VirialBlock)
    monitor: MonitorBlock = field(default_factory=MonitorBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    def model_params(self) -> ModelParams:
        return ModelParams(self.model.alpha, self.model.beta, self.model.gamma)

    def integrator_options(self) -> IntegratorOptions:
        b = self.integrator
        return IntegratorOptions(dt=b.dt, scheme=b.scheme, dealias=b.dealias,
                                 sponge_width=b.sponge_width,
                                 sponge_strength=b.sponge_strength)

    def virial_config(self) -> VirialConfig:
        v = self.virial
        if v.mu == "auto":
            mu = VirialConfig.default_mu(self.model_params(), v.theta)
        else:
            mu = float(v.mu)
        return VirialConfig(p1=v.p1, p2=v.p2, q1=v.q1, a=v.a, b=v.b, l=v.l,
                            theta=v.theta, mu=mu, m=v.m)

    def regions(self) -> list:
        out = []
        if self.monitor.centered:
            out.append(RegionSpec(kind="centered", p1=self.virial.p1,
                                  prefactor=self.monitor.prefactor, name="omega"))
        if self.monitor.ray:
            out.append(RegionSpec(kind="ray", p1=self.virial.p1,
                                  prefactor=self.monitor.prefactor,
                                  m=self.virial.m, name="ray"))
        return out


_BLOCKS = {f.name: f for f in dc_fields(RunConfig)}


def _parse_value(text: str, current):
    text = text.strip()
    if isinstance(current, bool):
        low = text.lower()
        if low in ("true", "on", "yes", "1"):
            return True
        if low in ("false", "off", "no", "0"):
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    if isinstance(current, int) and not isinstance(current, bool):
        return int(text)
    if isinstance(current, float):
        return float(text)
    if isinstance(current, list):
        items = [s.strip() for s in text.split(",") if s.strip()]
        try:
            return [float(s) for s in items]
        except ValueError:
            return items
    return text


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration; defaults are applied for
    every key not present."""
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if "." not in key:
            raise ConfigError(f"line {lineno}: key {key!r} lacks a section prefix")
        section, name = key.split(".", 1)
        if section not in _BLOCKS:
            raise ConfigError(f"line {lineno}: unknown section {section!r}")
        block = getattr(cfg, section)
        if not hasattr(block, name):
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            setattr(block, name, _parse_value(value, getattr(block, name)))
        except ValueError as err:
            raise ConfigError(f"line {lineno}: {key}: {err}") from err
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig):
    """Re-validate every module-level invariant, reporting the key path."""
    try:
        make_grid(cfg.grid.n, cfg.grid.length, cfg.grid.center)
    except GridError as err:
        raise ConfigError(f"grid: {err}") from err
    try:
        cfg.model_params()
    except ModelError as err:
        raise ConfigError(f"model: {err}") from err
    try:
        cfg.integrator_options()
    except ValueError as err:
        raise ConfigError(f"integrator: {err}") from err
    if cfg.integrator.t_final <= 0:
        raise ConfigError("integrator.t_final: must be positive")
    try:
        cfg.virial_config()
    except (VirialConfigError, ValueError) as err:
        raise ConfigError(f"virial: {err}") from err
    try:
        cfg.regions()
    except RegionError as err:
        raise ConfigError(f"monitor: {err}") from err
    if cfg.monitor.sample_dt <= 0:
        raise ConfigError("monitor.sample_dt: must be positive")
    if cfg.initial.kind not in ("gaussian", "soliton", "snapshot", "expression"):
        raise ConfigError(
            f"initial.kind: must be gaussian, soliton, snapshot or expression, "
            f"got {cfg.initial.kind!r}"
        )
    stride = cfg.monitor.sample_dt / cfg.integrator.dt
    if abs(stride - round(stride)) > 1e-9:
        raise ConfigError(
            "monitor.sample_dt: must be an integer multiple of integrator.dt"
        )


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(parse(t))) == parse(t)."""
    lines = []
    for section in _BLOCKS:
        block = getattr(cfg, section)
        for f in dc_fields(block):
            val = getattr(block, f.name)
            if isinstance(val, list):
                val = ", ".join(repr(v) if isinstance(v, float) else str(v)
                                for v in val)
            elif isinstance(val, float):
                val = repr(val)
            lines.append(f"{section}.{f.name} = {val}")
    return "\n".join(lines) + "\n"

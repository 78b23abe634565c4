"""Flat key = value experiment configs.

One assignment per line, dotted keys for grouping ("model.profile.delta =
1.5"), '#' comments, blank lines ignored.  Parsing records the line number of
every key so validation errors point at the offending line.  Keys are tracked
as they are consumed; anything left over after a runner has read its
parameters is reported as unknown or inapplicable, before any sampling
starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .models import (
    Kernel,
    ModelSpec,
    Profile,
    RadiusLaw,
    boolean_model,
    classical_model,
    custom_profile,
    generalized_model,
    indicator_profile,
    polynomial_profile,
)

MODEL_VARIANTS = ("boolean", "classical", "generalized")
KERNEL_KINDS = ("plain", "product", "sum", "min")
PROFILE_KINDS = ("indicator", "polynomial", "custom")
RADIUS_KINDS = ("constant", "pareto")


@dataclass
class ParsedConfig:
    path: str
    values: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)
    used: set = field(default_factory=set)

    def error(self, key: str, message: str) -> ConfigurationError:
        line = self.lines.get(key)
        where = f"{self.path}:{line}" if line is not None else self.path
        return ConfigurationError(f"{where}: {message}")

    def has(self, key: str) -> bool:
        return key in self.values

    def _raw(self, key: str, default, required: bool):
        if key not in self.values:
            if required:
                raise ConfigurationError(f"{self.path}: missing required key '{key}'")
            return default, False
        self.used.add(key)
        return self.values[key], True

    def get_str(self, key: str, default: str | None = None, choices=None, required: bool = False):
        value, present = self._raw(key, default, required)
        if present and choices is not None and value not in choices:
            raise self.error(key, f"'{key}' must be one of {', '.join(choices)}; got '{value}'")
        return value

    def get_float(self, key: str, default: float | None = None, required: bool = False):
        value, present = self._raw(key, default, required)
        if not present:
            return value
        try:
            return float(value)
        except ValueError:
            raise self.error(key, f"'{key}' expects a number; got '{value}'") from None

    def get_int(self, key: str, default: int | None = None, required: bool = False):
        value, present = self._raw(key, default, required)
        if not present:
            return value
        try:
            return int(value)
        except ValueError:
            raise self.error(key, f"'{key}' expects an integer; got '{value}'") from None

    def get_floats(self, key: str, default=None, required: bool = False):
        value, present = self._raw(key, default, required)
        if not present:
            return value
        try:
            parsed = [float(tok) for tok in value.split()]
        except ValueError:
            raise self.error(key, f"'{key}' expects space-separated numbers; got '{value}'") from None
        if not parsed:
            raise self.error(key, f"'{key}' is empty")
        return parsed

    def forbid(self, prefix_or_key: str, why: str):
        for key in self.values:
            if key == prefix_or_key or key.startswith(prefix_or_key + "."):
                if key not in self.used:
                    raise self.error(key, f"'{key}' does not apply: {why}")

    def ensure_all_used(self):
        for key in self.values:
            if key not in self.used:
                raise self.error(key, f"unknown or inapplicable key '{key}'")


def parse_config_text(text: str, path: str = "<config>") -> ParsedConfig:
    cfg = ParsedConfig(path=path)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigurationError(f"{path}:{lineno}: missing key before '='")
        if not value:
            raise ConfigurationError(f"{path}:{lineno}: missing value for '{key}'")
        if key in cfg.values:
            first = cfg.lines[key]
            raise ConfigurationError(f"{path}:{lineno}: duplicate key '{key}' (first set on line {first})")
        cfg.values[key] = value
        cfg.lines[key] = lineno
    return cfg


def parse_config_file(path: str) -> ParsedConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, path=path)


def serialize_config(cfg: ParsedConfig) -> str:
    """Normalized form: sorted keys, single spaces around '='."""
    return "".join(f"{key} = {cfg.values[key]}\n" for key in sorted(cfg.values))


def _build_profile(cfg: ParsedConfig) -> Profile:
    kind = cfg.get_str("model.profile.kind", choices=PROFILE_KINDS, required=True)
    if kind == "indicator":
        theta = cfg.get_float("model.profile.theta", default=1.0)
        cfg.forbid("model.profile.delta", "indicator profiles take only a threshold")
        cfg.forbid("model.profile.knots", "indicator profiles take only a threshold")
        cfg.forbid("model.profile.heights", "indicator profiles take only a threshold")
        return indicator_profile(theta)
    if kind == "polynomial":
        delta = cfg.get_float("model.profile.delta", required=True)
        cfg.forbid("model.profile.theta", "polynomial profiles take only a decay exponent")
        return polynomial_profile(delta)
    knots = cfg.get_floats("model.profile.knots", required=True)
    heights = cfg.get_floats("model.profile.heights", required=True)
    if len(knots) != len(heights):
        raise cfg.error("model.profile.heights", "knots and heights must have the same length")
    return custom_profile(knots, heights)


def build_model(cfg: ParsedConfig) -> ModelSpec:
    """Construct and validate the model before anything is sampled."""
    variant = cfg.get_str("model.variant", choices=MODEL_VARIANTS, required=True)
    d = cfg.get_int("model.d", required=True)
    if variant == "boolean":
        for prefix in ("model.kernel", "model.profile", "model.tau", "model.beta", "model.damping"):
            cfg.forbid(prefix, "the boolean variant is parameterized by its radius law alone")
        kind = cfg.get_str("model.radius.kind", choices=RADIUS_KINDS, required=True)
        if kind == "constant":
            cfg.forbid("model.radius.shape", "constant radii take only a value")
            cfg.forbid("model.radius.scale", "constant radii take only a value")
            law = RadiusLaw(kind="constant", radius=cfg.get_float("model.radius.value", required=True))
        else:
            cfg.forbid("model.radius.value", "heavy-tail radii take shape and scale")
            law = RadiusLaw(
                kind="pareto",
                shape=cfg.get_float("model.radius.shape", required=True),
                scale=cfg.get_float("model.radius.scale", required=True),
            )
        return boolean_model(d=d, radius_law=law)

    cfg.forbid("model.radius", "weight-kernel variants draw weights from marks, not radii")
    kernel = Kernel(cfg.get_str("model.kernel", choices=KERNEL_KINDS, required=True))
    profile = _build_profile(cfg)
    tau = cfg.get_float("model.tau", default=2.0)
    beta = cfg.get_float("model.beta", default=1.0)
    base = classical_model(d, kernel, profile, tau=tau, beta=beta)
    if variant == "classical":
        cfg.forbid("model.damping", "damping applies only to the context-dependent variant")
        return base
    return generalized_model(
        base,
        damping_radius=cfg.get_float("model.damping.radius", default=1.0),
        damping_factor=cfg.get_float("model.damping.factor", default=0.5),
    )


@dataclass(frozen=True)
class RunSettings:
    intensities: tuple
    trials: int
    seed: int
    threads: int
    confidence: float
    margin: float


def read_run_settings(cfg: ParsedConfig, need_intensity: bool = True) -> RunSettings:
    single = cfg.get_float("run.intensity") if cfg.has("run.intensity") else None
    many = cfg.get_floats("run.intensities") if cfg.has("run.intensities") else None
    if single is not None and many is not None:
        raise cfg.error("run.intensities", "give either run.intensity or run.intensities, not both")
    if single is not None:
        intensities = (single,)
    elif many is not None:
        intensities = tuple(many)
    elif need_intensity:
        raise ConfigurationError(f"{cfg.path}: missing required key 'run.intensity'")
    else:
        intensities = ()
    for lam in intensities:
        if lam < 0 or not np.isfinite(lam):
            raise cfg.error(
                "run.intensity" if cfg.has("run.intensity") else "run.intensities",
                "intensities must be finite and nonnegative",
            )
    trials = cfg.get_int("run.trials", default=200)
    if trials < 1:
        raise cfg.error("run.trials", "run.trials must be at least 1")
    seed = cfg.get_int("run.seed", default=0)
    threads = cfg.get_int("run.threads", default=1)
    if threads < 1:
        raise cfg.error("run.threads", "run.threads must be at least 1")
    confidence = cfg.get_float("run.confidence", default=0.95)
    if not 0 < confidence < 1:
        raise cfg.error("run.confidence", "run.confidence must be in (0, 1)")
    margin = cfg.get_float("run.margin", default=0.05)
    if margin <= 0:
        raise cfg.error("run.margin", "run.margin must be positive")
    return RunSettings(
        intensities=intensities,
        trials=trials,
        seed=seed,
        threads=threads,
        confidence=confidence,
        margin=margin,
    )

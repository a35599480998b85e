"""
Experiment configuration: strict TOML/JSON loading into nested dataclasses.
"""
import json
import re
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from sympy import isprime

from group_geometry import FiniteTowerGroup, LengthFunction, RootsOfUnityGroup, SolenoidGroup, validate_tower
from helpers import ConfigHelper, LoggerHelper
from helpers.constants import (
    CIRCLE_LENGTH_CHOICES, COCYCLE_CHOICES, COMBINATOR_CHOICES, FAMILY_BUNCE_DEDDENS, FAMILY_CHOICES,
    FAMILY_FINITE, FAMILY_ROOTS_OF_UNITY, FAMILY_SOLENOID, FUNCTION_PRESETS, NORM_CHOICES,
)
from helpers.exceptions import ConfigParseError, ConfigValidationError
from twisted_algebra import Cocycle

logger = LoggerHelper.get_logger(__name__, prefix='experiment-config')

_TOML_LOCATION = re.compile(r"line (\d+), column (\d+)")


@dataclass
class FamilyConfig:
    name: str = FAMILY_SOLENOID
    p: int = 2
    d: int = 1
    norm: str = "max"
    alpha: List[int] = field(default_factory=list)
    circle_length: str = "arc"

    def validate(self):
        if self.name not in FAMILY_CHOICES:
            raise ConfigValidationError("family.name", f"must be one of {FAMILY_CHOICES}, got {self.name!r}")
        if self.name == FAMILY_SOLENOID:
            if not isprime(self.p):
                raise ConfigValidationError("family.p", f"{self.p} is not prime")
            if self.d < 1:
                raise ConfigValidationError("family.d", "rank must be at least 1")
            if self.norm not in NORM_CHOICES:
                raise ConfigValidationError("family.norm", f"must be one of {NORM_CHOICES}")
        else:
            if not self.alpha:
                raise ConfigValidationError("family.alpha", "a tower needs at least one level")
            try:
                validate_tower(self.alpha)
            except ValueError as e:
                raise ConfigValidationError("family.alpha", str(e))
            if self.circle_length not in CIRCLE_LENGTH_CHOICES:
                raise ConfigValidationError("family.circle_length", f"must be one of {CIRCLE_LENGTH_CHOICES}")

    def build_group(self):
        if self.name == FAMILY_SOLENOID:
            return SolenoidGroup(self.p, self.d, self.norm)
        if self.name == FAMILY_BUNCE_DEDDENS:
            return RootsOfUnityGroup(self.alpha, integer_factor=True, circle_length=self.circle_length)
        if self.name == FAMILY_ROOTS_OF_UNITY:
            return RootsOfUnityGroup(self.alpha, integer_factor=False, circle_length=self.circle_length)
        return FiniteTowerGroup(self.alpha, circle_length=self.circle_length)


@dataclass
class GeometryConfig:
    combinator: str = "max"
    theta: float = 2.0
    doubling_radii: List[float] = field(default_factory=lambda: [1.0, 2.0, 4.0])
    doubling_bound: Optional[float] = None

    def validate(self):
        if self.combinator not in COMBINATOR_CHOICES:
            raise ConfigValidationError("geometry.combinator", f"must be one of {COMBINATOR_CHOICES}")
        if self.theta <= 1:
            raise ConfigValidationError("geometry.theta", "dilation must exceed 1")
        if any(r < 1 for r in self.doubling_radii):
            raise ConfigValidationError("geometry.doubling_radii", "radii must be at least 1")


@dataclass
class CocycleConfig:
    kind: str = "trivial"
    theta: Optional[List[List[str]]] = None

    def validate(self, family: FamilyConfig):
        if self.kind not in COCYCLE_CHOICES:
            raise ConfigValidationError("cocycle.kind", f"must be one of {COCYCLE_CHOICES}")
        if self.kind == "skew" and family.name != FAMILY_SOLENOID:
            raise ConfigValidationError("cocycle.kind", "the skew cocycle needs a solenoid family")
        if self.kind == "bunce_deddens" and family.name == FAMILY_SOLENOID:
            raise ConfigValidationError("cocycle.kind", "the Bunce-Deddens cocycle needs a tower family")
        if self.theta is not None:
            if len(self.theta) != family.d or any(len(row) != family.d for row in self.theta):
                raise ConfigValidationError("cocycle.theta", f"must be a {family.d}×{family.d} matrix")
            try:
                self.matrix()
            except (ValueError, ZeroDivisionError) as e:
                raise ConfigValidationError("cocycle.theta", f"entries must be rationals: {e}")

    def matrix(self) -> Optional[List[List[Fraction]]]:
        if self.theta is None:
            return None
        return [[Fraction(str(v)) for v in row] for row in self.theta]

    def build(self, group) -> Cocycle:
        return Cocycle.by_name(group, self.kind, self.matrix())


@dataclass
class ExperimentSection:
    levels: List[int] = field(default_factory=lambda: [0, 1, 2])
    radii: List[float] = field(default_factory=lambda: [2.0, 4.0])
    samples: int = 12
    support_size: int = 3
    bridge_samples: int = 6
    dynamics_samples: int = 8
    times: List[float] = field(default_factory=lambda: [0.0, 0.25, 0.5, 1.0])
    function: str = "resolvent"
    trace_zero: bool = True
    window_factor: Optional[float] = None
    fejer_width: Optional[float] = None
    diameter_proxy: Optional[float] = None
    epsilon: Optional[float] = None
    bridge_support: str = "level"

    def validate(self):
        if not self.radii:
            raise ConfigValidationError("experiment.radii", "at least one radius is required")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ConfigValidationError("experiment.radii", "radii not increasing")
        if any(r <= 0 for r in self.radii):
            raise ConfigValidationError("experiment.radii", "radii must be positive")
        if not self.levels or any(n < 0 for n in self.levels):
            raise ConfigValidationError("experiment.levels", "levels must be nonnegative and nonempty")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ConfigValidationError("experiment.levels", "levels not increasing")
        for name in ("samples", "support_size", "bridge_samples", "dynamics_samples"):
            if getattr(self, name) < 1:
                raise ConfigValidationError(f"experiment.{name}", "must be at least 1")
        if any(t < 0 for t in self.times):
            raise ConfigValidationError("experiment.times", "times must be nonnegative")
        if self.function not in FUNCTION_PRESETS:
            raise ConfigValidationError("experiment.function", f"must be one of {FUNCTION_PRESETS}")
        if self.window_factor is not None and self.window_factor <= 1:
            raise ConfigValidationError("experiment.window_factor", "window must be strictly larger than the level ball")
        if self.diameter_proxy is not None and self.diameter_proxy <= 0:
            raise ConfigValidationError("experiment.diameter_proxy", "must be positive")
        if self.epsilon is not None:
            if self.epsilon <= 0:
                raise ConfigValidationError("experiment.epsilon", "must be positive")
            if self.diameter_proxy is not None and self.epsilon >= self.diameter_proxy / 2:
                raise ConfigValidationError("experiment.epsilon", "must be below half the diameter proxy")
        if self.bridge_support not in ("level", "window"):
            raise ConfigValidationError("experiment.bridge_support", "must be 'level' or 'window'")


@dataclass
class LabSection:
    budget: int = field(default_factory=lambda: ConfigHelper().get_budget())
    tolerance: float = field(default_factory=lambda: ConfigHelper().get_tolerance())
    seed: int = field(default_factory=lambda: ConfigHelper().get_seed())

    def validate(self):
        if self.budget < 1:
            raise ConfigValidationError("lab.budget", "must be positive")
        if not 0 < self.tolerance < 1:
            raise ConfigValidationError("lab.tolerance", "must lie in (0, 1)")
        if self.seed < 0:
            raise ConfigValidationError("lab.seed", "must be nonnegative")


@dataclass
class OutputSection:
    directory: str = field(default_factory=lambda: ConfigHelper().get_output_dir())
    format: str = field(default_factory=lambda: ConfigHelper().get_output_format())

    def validate(self):
        if self.format not in ("json", "csv"):
            raise ConfigValidationError("output.format", "must be 'json' or 'csv'")


@dataclass
class ExperimentConfig:
    family: FamilyConfig = field(default_factory=FamilyConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    cocycle: CocycleConfig = field(default_factory=CocycleConfig)
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    lab: LabSection = field(default_factory=LabSection)
    output: OutputSection = field(default_factory=OutputSection)

    def validate(self) -> "ExperimentConfig":
        self.family.validate()
        self.geometry.validate()
        self.cocycle.validate(self.family)
        self.experiment.validate()
        self.lab.validate()
        self.output.validate()
        return self

    def build_group(self):
        return self.family.build_group()

    def build_length(self, group=None) -> LengthFunction:
        return LengthFunction.standard(group or self.build_group(), self.geometry.combinator)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_mapping(cls, raw: Dict[str, Any]) -> "ExperimentConfig":
        """Strict construction: unknown keys and mistyped values are rejected"""
        if not isinstance(raw, dict):
            raise ConfigValidationError("<root>", "configuration must be a table")
        raw = dict(raw)
        if isinstance(raw.get("family"), str):
            raw["family"] = {"name": raw["family"]}
        sections = {}
        for f in fields(cls):
            sections[f.name] = _build_section(f.name, f.default_factory, raw.pop(f.name, {}))
        if raw:
            raise ConfigValidationError(sorted(raw)[0], "unknown key")
        return cls(**sections).validate()


def _coerce(name: str, value: Any, template: Any) -> Any:
    if isinstance(template, bool):
        if not isinstance(value, bool):
            raise ConfigValidationError(name, "expected a boolean")
        return value
    if isinstance(template, int) and not isinstance(template, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigValidationError(name, "expected an integer")
        return value
    if isinstance(template, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigValidationError(name, "expected a number")
        return float(value)
    if isinstance(template, str):
        if not isinstance(value, str):
            raise ConfigValidationError(name, "expected a string")
        return value
    return value


_LIST_ITEMS = {
    "family.alpha": int,
    "geometry.doubling_radii": float,
    "experiment.levels": int,
    "experiment.radii": float,
    "experiment.times": float,
}

_OPTIONAL_FLOATS = {
    "geometry.doubling_bound", "experiment.window_factor", "experiment.fejer_width",
    "experiment.diameter_proxy", "experiment.epsilon",
}


def _build_section(section: str, factory, raw: Union[Dict[str, Any], Any]):
    if not isinstance(raw, dict):
        raise ConfigValidationError(section, "expected a table")
    instance = factory()
    known = {f.name for f in fields(instance)}
    for key, value in raw.items():
        name = f"{section}.{key}"
        if key not in known:
            raise ConfigValidationError(name, "unknown key")
        if name in _LIST_ITEMS:
            if not isinstance(value, list):
                raise ConfigValidationError(name, "expected a list")
            value = [_coerce(name, v, _LIST_ITEMS[name]()) for v in value]
        elif name in _OPTIONAL_FLOATS:
            value = None if value is None else _coerce(name, value, 0.0)
        elif name == "cocycle.theta" and value is not None:
            if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
                raise ConfigValidationError(name, "expected a matrix")
            value = [[str(v) for v in row] for row in value]
        else:
            value = _coerce(name, value, getattr(instance, key))
        setattr(instance, key, value)
    return instance


def parse_config_text(text: str, fmt: str = "toml") -> Dict[str, Any]:
    if fmt == "json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigParseError(e.msg, e.lineno, e.colno)
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _TOML_LOCATION.search(str(e))
        line, column = (int(match.group(1)), int(match.group(2))) if match else (None, None)
        raise ConfigParseError(str(e).split(" (at")[0], line, column)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Load and validate an experiment file; .json is read as JSON, anything else as TOML"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigParseError(f"cannot read {path}: {e.strerror}")
    fmt = "json" if path.suffix.lower() == ".json" else "toml"
    config = ExperimentConfig.from_mapping(parse_config_text(text, fmt))
    logger.debug(f"Loaded experiment config from {path}", extra={"family": config.family.name})
    return config


def emit_config(config: ExperimentConfig, path: Union[str, Path]) -> Path:
    """Write the config snapshot as JSON; load_config reads it back unchanged"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path

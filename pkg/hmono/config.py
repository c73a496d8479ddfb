"""Toolkit configuration: numerical settings profiles and experiment documents."""

import json
import os
import tomllib
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Annotated, Literal

import yaml
from pydantic import BaseModel, Field, ValidationError, confloat, conint, root_validator, validator

from hmono.checks.transport.zoo import ZOO
from hmono.errors import ConfigError

type ConfigDict = dict[str, str | int | float | bool | list[str]]

PYPROJECT = Path(__file__).parent.parent / "pyproject.toml"


@dataclass(frozen=True)
class QuadratureSettings:
    order: int
    tolerance: float
    floor: float
    max_depth: int


@dataclass(frozen=True)
class SamplingSettings:
    budget: int
    pair_threshold: int
    pair_samples: int
    particles: int
    green_radial_order: int
    green_budget: int


@dataclass(frozen=True)
class Settings:
    quadrature: QuadratureSettings
    sampling: SamplingSettings
    cert_tolerance: float
    closed_form_tolerance: float
    quadrature_tolerance: float
    newton_max_iter: int
    newton_tol: float
    fd_step: float
    threads: int
    seed: int


def load_settings(profile: str = "default") -> Settings:
    match profile:
        case "default":
            quadrature = QuadratureSettings(order=16, tolerance=1e-9, floor=1e-15, max_depth=20)
            sampling = SamplingSettings(
                budget=100_000,
                pair_threshold=512,
                pair_samples=100_000,
                particles=1_048_576,
                green_radial_order=64,
                green_budget=10_000,
            )
        case "fast":
            quadrature = QuadratureSettings(order=12, tolerance=1e-7, floor=1e-13, max_depth=14)
            sampling = SamplingSettings(
                budget=16_384,
                pair_threshold=256,
                pair_samples=20_000,
                particles=65_536,
                green_radial_order=32,
                green_budget=2_048,
            )
        case "thorough":
            quadrature = QuadratureSettings(order=20, tolerance=1e-10, floor=1e-16, max_depth=24)
            sampling = SamplingSettings(
                budget=200_000,
                pair_threshold=1024,
                pair_samples=200_000,
                particles=2_097_152,
                green_radial_order=96,
                green_budget=20_000,
            )
        case other:
            raise ValueError(f"Unknown settings profile: {other}")

    settings = Settings(
        quadrature=quadrature,
        sampling=sampling,
        cert_tolerance=1e-9,
        closed_form_tolerance=1e-9,
        quadrature_tolerance=1e-6,
        newton_max_iter=50,
        newton_tol=1e-10,
        fd_step=1e-5,
        threads=_thread_cap(),
        seed=0,
    )
    return _apply_tool_overrides(settings, get_tool_config())


def get_tool_config() -> ConfigDict:
    """Read toolkit overrides from pyproject.toml."""
    if not PYPROJECT.exists():
        return {}
    with open(PYPROJECT, "rb") as f:
        data = tomllib.load(f)
    return data.get("tool", {}).get("hmono", {})


def _thread_cap() -> int:
    raw = os.environ.get("HMONO_THREADS")
    if raw is None:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"HMONO_THREADS must be an integer, got {raw!r}")
    if threads < 1:
        raise ValueError(f"HMONO_THREADS must be positive, got {threads}")
    return threads


def _apply_tool_overrides(settings: Settings, overrides: ConfigDict) -> Settings:
    for key, value in overrides.items():
        match key:
            case "seed":
                settings = replace(settings, seed=int(value))
            case "quadrature_order":
                settings = replace(settings, quadrature=replace(settings.quadrature, order=int(value)))
            case "budget":
                settings = replace(settings, sampling=replace(settings.sampling, budget=int(value)))
            case "cert_tolerance":
                settings = replace(settings, cert_tolerance=float(value))
            case unknown:
                raise ConfigError(f"Unknown [tool.hmono] key: {unknown}")
    return settings


# --- experiment documents ---------------------------------------------------


class CostSpec(BaseModel):
    family: Literal["isotropic", "weighted"] = "isotropic"
    n: conint(ge=1)
    p: confloat(ge=2)
    weights: list[float] | None = None

    @root_validator(skip_on_failure=True)
    def check_weights(cls, values):
        family, weights, n = values["family"], values.get("weights"), values["n"]
        match family:
            case "weighted" if weights is None or len(weights) != n:
                raise ValueError(f"weighted cost needs {n} weights, got {weights}")
            case "weighted" if min(weights) <= 0:
                raise ValueError(f"weights must be positive, got {weights}")
            case "isotropic" if weights is not None:
                raise ValueError("isotropic cost takes no weights")
        return values


class ZooSource(BaseModel):
    kind: Literal["zoo"]
    name: str
    params: dict = Field(default_factory=dict)
    points: conint(ge=2) = 256

    @validator("name")
    def known_map(cls, value: str) -> str:
        if value not in ZOO:
            raise ValueError(f"unknown zoo map '{value}', expected one of {sorted(ZOO)}")
        return value


class CsvSource(BaseModel):
    kind: Literal["csv"]
    path: Path

    @validator("path")
    def path_exists(cls, value: Path) -> Path:
        if not value.exists():
            raise ValueError(f"map file not found: {value}")
        return value


class AssignmentSource(BaseModel):
    kind: Literal["assignment"]
    points: conint(ge=1) = 64
    spread: confloat(gt=0) = 0.05
    seed: int = 0


class CheckParams(BaseModel):
    kind: Literal["check"]
    mode: Literal["h", "bilinear", "classical"] = "h"
    matrix: list[list[float]] | None = None
    tolerance: confloat(gt=0) | None = None


class CertifyParams(BaseModel):
    kind: Literal["certify"]
    center: list[float] | None = None
    radius: confloat(gt=0) = 1.0
    beta: confloat(gt=0, lt=1) = 0.5
    budget: conint(ge=1) | None = None
    probe: bool = True


class Lemma51Params(BaseModel):
    kind: Literal["lemma51"]
    matrix: list[list[float]] | None = None
    offset: list[float] | None = None
    center: list[float] | None = None
    radius: confloat(gt=0) = 1.0
    beta: confloat(gt=0, lt=1) = 0.5
    budget: conint(ge=1) | None = None


class InterpParams(BaseModel):
    kind: Literal["interp"]
    beta: confloat(gt=0, lt=1) = 0.5
    beta_bar: confloat(gt=0, lt=1) = 0.75
    t_grid: list[confloat(ge=0, le=1)] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    budget: conint(ge=1) | None = None
    box: confloat(gt=0) = 1.0
    cells: conint(ge=2) = 32
    particles: conint(ge=10_000) | None = None
    energy_threshold: confloat(gt=0) | None = None

    @root_validator(skip_on_failure=True)
    def check_order(cls, values):
        if not values["beta"] < values["beta_bar"]:
            raise ValueError(f"need beta < beta_bar, got {values['beta']} >= {values['beta_bar']}")
        return values


class FluidParams(BaseModel):
    kind: Literal["fluid"]
    beta_inner: confloat(gt=0, lt=1) = 0.4
    beta: confloat(gt=0, lt=1) = 0.5
    beta_outer: confloat(gt=0, lt=1) = 0.6
    t_samples: conint(ge=1) = 8
    budget: conint(ge=1) | None = None

    @root_validator(skip_on_failure=True)
    def check_order(cls, values):
        if not values["beta_inner"] < values["beta"] < values["beta_outer"]:
            raise ValueError("need beta_inner < beta < beta_outer")
        return values


class GreenParams(BaseModel):
    kind: Literal["green-check"]
    n: conint(ge=3) = 3
    function: Literal["quadratic", "harmonic", "gaussian"] = "quadratic"
    center: list[float] | None = None
    radius: confloat(gt=0) = 1.0
    budgets: list[conint(ge=1)] = Field(default_factory=lambda: [256, 512, 1024, 2048])
    probe_delta: confloat(gt=0, lt=1) | None = None


CheckSpec = Annotated[
    CheckParams | CertifyParams | Lemma51Params | InterpParams | FluidParams | GreenParams,
    Field(discriminator="kind"),
]


class ExperimentConfig(BaseModel):
    cost: CostSpec
    map: ZooSource | CsvSource | AssignmentSource = Field(..., discriminator="kind")
    checks: list[CheckSpec] = Field(default_factory=list)
    output: Path = Path("reports")
    seed: int | None = None
    profile: Literal["default", "fast", "thorough"] = "default"

    class Config:
        extra = "forbid"


def load_experiment(path: str | Path) -> ExperimentConfig:
    """Load and validate a JSON (or YAML) experiment document."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")

    text = path.read_text()
    match path.suffix.lower():
        case ".yaml" | ".yml":
            try:
                document = yaml.safe_load(text)
            except yaml.YAMLError as e:
                raise ConfigError(f"{path}: invalid YAML: {e}") from e
        case _:
            try:
                document = json.loads(text)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e

    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top-level document must be an object")

    try:
        return ExperimentConfig.parse_obj(document)
    except ValidationError as e:
        fields = "; ".join(f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"{path}: {fields}") from e

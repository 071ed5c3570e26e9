"""JSON run configuration: parsing, validation and serialisation.

Example document::

    {
      "problem": {
        "alpha": 2.5, "beta": 0.5, "gamma": 0.2, "p": 1.5,
        "etas": [0.3333333333333333, 0.3333333333333333],
        "xis": [0.3333333333333333, 0.6666666666666666],
        "a": {"kind": "indicator", "upper": 1.0},
        "f": {"kind": "example41"},
        "B_delta": {"kind": "linear", "slope": 0.3333333333333333, "intercept": 0.1111111111111111},
        "J": null
      },
      "grid": {"S_max": 20.0, "N": 256, "grading": 2.0},
      "solver": {"omega": 1.0, "tol": 1e-10, "max_iter": 500},
      "sampler": {"t_horizon": 50.0, "samples": 64},
      "delta": 0.1,
      "outputs": {"csv_path": "solution.csv", "report_path": null}
    }

Every section except ``problem`` and ``delta`` has defaults; unknown keys
are rejected at every level.
"""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

from .errors import DomainError, FracBVPError
from .families import LinearBound, coefficient_from_descriptor, nonlinearity_from_descriptor
from .grid import Grid
from .problem import DEFAULT_LATTICE, DEFAULT_T_HORIZON, ProblemSpec
from .solver import SolverConfig


class ConfigError(FracBVPError, ValueError):
    """The configuration document is malformed or out of range."""


@dataclass
class ProblemConfig:
    alpha: float
    beta: float
    gamma: float
    p: float
    etas: list
    xis: list
    a: dict
    f: dict
    B_delta: Optional[dict] = None
    J: Optional[float] = None

    def build(self) -> ProblemSpec:
        bound = None
        if self.B_delta is not None:
            desc = dict(self.B_delta)
            if desc.pop("kind", None) != "linear" or set(desc) != {"slope", "intercept"}:
                raise ConfigError(
                    "B_delta must be {'kind': 'linear', 'slope': ..., 'intercept': ...}")
            bound = LinearBound(float(desc["slope"]), float(desc["intercept"]))
        return ProblemSpec(
            alpha=float(self.alpha), beta=float(self.beta), gamma_ord=float(self.gamma),
            p=float(self.p), etas=self.etas, xis=self.xis,
            a=coefficient_from_descriptor(self.a), f=nonlinearity_from_descriptor(self.f),
            f_weighted_bound=bound,
        )


@dataclass
class GridConfig:
    S_max: float = 20.0
    N: int = 256
    grading: float = 2.0

    def build(self) -> Grid:
        return Grid.graded(float(self.S_max), self.N, float(self.grading))


@dataclass
class SolverSettings:
    omega: float = 1.0
    tol: float = 1e-10
    max_iter: int = 500

    def build(self, grid: Grid) -> SolverConfig:
        return SolverConfig(grid, float(self.omega), float(self.tol), self.max_iter)


@dataclass
class SamplerSettings:
    t_horizon: float = DEFAULT_T_HORIZON
    samples: int = DEFAULT_LATTICE


@dataclass
class OutputConfig:
    csv_path: Optional[str] = None
    report_path: Optional[str] = None


@dataclass
class RunConfig:
    problem: Optional[ProblemConfig] = None
    grid: GridConfig = field(default_factory=GridConfig)
    solver: SolverSettings = field(default_factory=SolverSettings)
    sampler: SamplerSettings = field(default_factory=SamplerSettings)
    delta: Optional[float] = None
    outputs: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def from_dict(cls, doc) -> RunConfig:
        _expect_keys(doc, cls, "config")
        sections = {
            "problem": ProblemConfig, "grid": GridConfig, "solver": SolverSettings,
            "sampler": SamplerSettings, "outputs": OutputConfig,
        }
        kwargs = {}
        for name, sub in sections.items():
            if doc.get(name) is not None:
                _expect_keys(doc[name], sub, name)
                try:
                    kwargs[name] = sub(**copy.deepcopy(doc[name]))
                except TypeError as exc:
                    raise ConfigError(f"section {name!r}: {exc}") from None
        if doc.get("delta") is not None:
            kwargs["delta"] = doc["delta"]
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def validate(self):
        """Build every runtime object once so range errors surface at load time."""
        try:
            grid = self.grid.build()
            self.solver.build(grid)
            if self.problem is not None:
                self.problem.build()
            if self.delta is not None and not float(self.delta) > 0.0:
                raise ConfigError(f"delta must be positive, got {self.delta}")
            if int(self.sampler.samples) != self.sampler.samples or self.sampler.samples < 2:
                raise ConfigError("sampler.samples must be an integer >= 2")
            if not float(self.sampler.t_horizon) > 0.0:
                raise ConfigError("sampler.t_horizon must be positive")
        except (DomainError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def loads(cls, text: str) -> RunConfig:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)

    @classmethod
    def load(cls, path) -> RunConfig:
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _expect_keys(doc, cls, where):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where} must be a JSON object")
    allowed = {f.name for f in fields(cls)}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")

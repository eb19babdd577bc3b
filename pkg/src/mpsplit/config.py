"""JSON run configurations for the CLI subcommands."""

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}


@dataclass
class ExperimentConfig:
    dims: list = field(default_factory=lambda: [784, 1000, 10])
    step_size: float = 0.05
    epochs: int = 10
    batch_size: int = 64
    seed: int = 0
    split_period: int = 3
    removal_fraction: float = 0.45
    gamma: float = 0.012
    alpha: float = 0.25
    beta: float = 0.5
    mode: str = "non_split"
    data_dir: str = None
    train_images: str = None
    train_labels: str = None
    test_images: str = None
    test_labels: str = None
    train_limit: int = None
    test_limit: int = None
    out: str = "runs/train"
    figures: bool = True

    @property
    def split_enabled(self):
        return self.mode == "split"

    def validate(self):
        if self.mode not in ("split", "non_split"):
            raise ConfigError(f"mode must be 'split' or 'non_split', got {self.mode!r}")
        if len(self.dims) < 2 or any(int(d) < 1 for d in self.dims):
            raise ConfigError(f"invalid architecture {self.dims}")
        if not self.step_size > 0:
            raise ConfigError("step_size must be positive")
        if self.epochs < 0 or self.batch_size < 1:
            raise ConfigError("epochs must be >= 0 and batch_size >= 1")
        if self.split_period < 1:
            raise ConfigError("split_period must be >= 1")
        if not 0 <= self.removal_fraction < 1:
            raise ConfigError("removal_fraction must lie in [0, 1)")
        if not 0 <= self.gamma <= 1:
            raise ConfigError("gamma must lie in [0, 1]")
        _check_bema(self.alpha, self.beta)
        resolve_data_paths(self)


@dataclass
class AnalyzeConfig:
    checkpoint: str = None
    layer: int = 0
    matrix: str = None
    alpha: float = 0.25
    beta: float = 0.5
    gamma: float = 0.012
    removal_fraction: float = 0.45
    seed: int = 0
    out: str = "runs/analyze"
    figures: bool = True

    def validate(self):
        if (self.checkpoint is None) == (self.matrix is None):
            raise ConfigError("give exactly one of 'checkpoint' (with 'layer') or 'matrix'")
        if not 0 <= self.gamma <= 1:
            raise ConfigError("gamma must lie in [0, 1]")
        if not 0 <= self.removal_fraction < 1:
            raise ConfigError("removal_fraction must lie in [0, 1)")
        _check_bema(self.alpha, self.beta)


@dataclass
class SynthConfig:
    n: int = 1000
    seed: int = 0
    seeds: list = None
    noise_sigma: float = 1.0
    deterministic_part: str = "example_formula"
    theta: float = 0.0
    alpha: float = 0.25
    beta: float = 0.5
    gamma: float = 0.05
    alpha_grid: list = field(default_factory=lambda: [round(0.05 * k, 2) for k in range(1, 10)])
    beta_grid: list = field(default_factory=lambda: [round(0.05 * k, 2) for k in range(1, 20)])
    out: str = "runs/synth"
    figures: bool = True

    def validate(self):
        if self.deterministic_part not in ("none", "example_formula", "rank_one"):
            raise ConfigError(f"unknown deterministic_part {self.deterministic_part!r}")
        if self.n < 10:
            raise ConfigError("n must be at least 10")
        _check_bema(self.alpha, self.beta)
        for a in self.alpha_grid:
            _check_bema(a, self.beta)
        for b in self.beta_grid:
            _check_bema(self.alpha, b)


@dataclass
class SweepConfig:
    checkpoint: str = None
    layer: int = 0
    ranks: list = None
    alpha: float = 0.25
    beta: float = 0.5
    seed: int = 0
    data_dir: str = None
    test_images: str = None
    test_labels: str = None
    test_limit: int = None
    out: str = "runs/sweep"
    figures: bool = True

    def validate(self):
        if self.checkpoint is None:
            raise ConfigError("'checkpoint' is required")
        if self.ranks is not None and any(int(r) < 1 for r in self.ranks):
            raise ConfigError("truncation ranks must be >= 1; rank 0 leaves no path through the layer")
        _check_bema(self.alpha, self.beta)
        resolve_data_paths(self, keys=("test_images", "test_labels"))


def _check_bema(alpha, beta):
    if not 0 < alpha < 0.5:
        raise ConfigError(f"alpha must lie in (0, 0.5), got {alpha}")
    if not 0 < beta < 1:
        raise ConfigError(f"beta must lie in (0, 1), got {beta}")


def resolve_data_paths(cfg, keys=tuple(MNIST_FILES)):
    for key in keys:
        if getattr(cfg, key) is None:
            if cfg.data_dir is None:
                raise ConfigError(f"'{key}' not set and no 'data_dir' given")
            setattr(cfg, key, str(Path(cfg.data_dir) / MNIST_FILES[key]))
        if not Path(getattr(cfg, key)).exists():
            raise ConfigError(f"{key}: {getattr(cfg, key)} does not exist")


def from_dict(cls, data):
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return cls(**data)


def load_config(cls, path=None, overrides=None):
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    try:
        cfg = from_dict(cls, data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate()
    return cfg


def to_dict(cfg):
    return dataclasses.asdict(cfg)

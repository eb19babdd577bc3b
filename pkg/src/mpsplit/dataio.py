"""MNIST IDX parsing, synthetic spiked matrices and network checkpoints."""

import gzip
import json
import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadMagicError,
    CheckpointError,
    CheckpointVersionError,
    CountMismatchError,
    DataError,
    TruncatedFileError,
)
from .nn import Layer, Network

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801
CHECKPOINT_FORMAT = "mpsplit-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass
class Dataset:
    images: np.ndarray  # (n, 784) float64 in [0, 1]
    labels: np.ndarray  # (n,) int64
    split: str = "train"

    def __post_init__(self):
        if len(self.images) != len(self.labels):
            raise ValueError("images and labels differ in length")

    def __len__(self):
        return len(self.labels)

    def head(self, n):
        if n is None or n >= len(self):
            return self
        return Dataset(self.images[:n], self.labels[:n], self.split)


def _read_bytes(path):
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return raw


def _header(raw, path, magic, n_dims):
    size = 4 + 4 * n_dims
    if len(raw) < size:
        raise TruncatedFileError(f"{path}: header needs {size} bytes, file ends at byte {len(raw)}")
    fields = struct.unpack(f">{1 + n_dims}I", raw[:size])
    if fields[0] != magic:
        raise BadMagicError(
            f"{path}: bad magic {fields[0]} at byte 0 (expected {magic})"
        )
    return fields[1:], size


def read_idx_images(path):
    raw = _read_bytes(path)
    (count, rows, cols), offset = _header(raw, path, IMAGES_MAGIC, 3)
    need = offset + count * rows * cols
    if len(raw) < need:
        raise TruncatedFileError(
            f"{path}: expected {need} bytes for {count} images, file ends at byte {len(raw)}"
        )
    pixels = np.frombuffer(raw, dtype=np.uint8, count=count * rows * cols, offset=offset)
    return pixels.reshape(count, rows * cols).astype(np.float64) / 255.0


def read_idx_labels(path):
    raw = _read_bytes(path)
    (count,), offset = _header(raw, path, LABELS_MAGIC, 1)
    if len(raw) < offset + count:
        raise TruncatedFileError(
            f"{path}: expected {offset + count} bytes for {count} labels, file ends at byte {len(raw)}"
        )
    labels = np.frombuffer(raw, dtype=np.uint8, count=count, offset=offset).astype(np.int64)
    bad = np.flatnonzero(labels > 9)
    if bad.size:
        raise DataError(f"{path}: label {labels[bad[0]]} out of range at byte {offset + bad[0]}")
    return labels


def load_mnist(images_path, labels_path, split="train"):
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if len(images) != len(labels):
        raise CountMismatchError(
            f"{images_path} holds {len(images)} images (count at byte 4) but "
            f"{labels_path} holds {len(labels)} labels (count at byte 4)"
        )
    return Dataset(images, labels, split)


@dataclass(frozen=True)
class SpikedMatrixSpec:
    """Noise-plus-signal matrix ``noise_sigma * R + S`` with ``R`` iid standard normal.

    ``deterministic_part`` is ``"none"``, ``"example_formula"`` or
    ``"rank_one"`` (the latter scaled by ``theta``).
    """

    n: int = 1000
    seed: int = 0
    noise_sigma: float = 1.0
    deterministic_part: str = "example_formula"
    theta: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.noise_sigma > 0:
            raise ValueError("noise_sigma must be positive")
        if self.deterministic_part not in ("none", "example_formula", "rank_one"):
            raise ValueError(f"unknown deterministic part {self.deterministic_part!r}")


def example_signal(n):
    """Deterministic signal built from tan/cos/log/sin terms, 1-based indices."""
    i = np.arange(1, n + 1, dtype=np.float64)[:, None]
    j = np.arange(1, n + 1, dtype=np.float64)[None, :]
    return np.tan(math.pi / 2 + 1.0 / (j + 1)) + np.cos(i) * np.log(i + j + 1) + np.sin(j) * np.cos(i / j)


def gen_spiked(spec):
    rng = np.random.default_rng(spec.seed)
    noise = spec.noise_sigma * rng.standard_normal((spec.n, spec.n))
    if spec.deterministic_part == "none":
        return noise
    if spec.deterministic_part == "example_formula":
        return noise + example_signal(spec.n)
    # unit vectors drawn after the noise so theta=0 reproduces the pure-noise matrix
    u = rng.standard_normal(spec.n)
    v = rng.standard_normal(spec.n)
    u /= np.linalg.norm(u)
    v /= np.linalg.norm(v)
    return noise + spec.theta * np.outer(u, v)


def save_checkpoint(net, path, seed=None, extra=None):
    """Write ``manifest.json`` plus one ``layer_XXX.bin`` per layer into directory ``path``.

    Each blob is little-endian float64: row-major weights, then the bias if present.
    """
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    layers = []
    for k, layer in enumerate(net.layers):
        name = f"layer_{k:03d}.bin"
        blob = layer.weights.astype("<f8").tobytes(order="C")
        if layer.bias is not None:
            blob += layer.bias.astype("<f8").tobytes()
        tmp = path / (name + ".tmp")
        tmp.write_bytes(blob)
        os.replace(tmp, path / name)
        layers.append({
            "file": name,
            "out_dim": layer.out_dim,
            "in_dim": layer.in_dim,
            "activation": layer.activation,
            "has_bias": layer.bias is not None,
        })
    manifest = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "dims": net.dims,
        "activations": [layer.activation for layer in net.layers],
        "seed": seed,
        "layers": layers,
    }
    if extra:
        manifest["extra"] = extra
    tmp = path / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=2))
    os.replace(tmp, path / "manifest.json")
    return path


def read_manifest(path):
    path = Path(path)
    try:
        manifest = json.loads((path / "manifest.json").read_text())
    except FileNotFoundError as exc:
        raise CheckpointError(f"{path}: no manifest.json") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CheckpointVersionError(f"{path}: unreadable manifest header ({exc})") from exc
    if not isinstance(manifest, dict) or manifest.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointVersionError(f"{path}: not a {CHECKPOINT_FORMAT} manifest")
    if manifest.get("version") != CHECKPOINT_VERSION:
        raise CheckpointVersionError(
            f"{path}: checkpoint version {manifest.get('version')!r}, expected {CHECKPOINT_VERSION}"
        )
    return manifest


def load_checkpoint(path):
    path = Path(path)
    manifest = read_manifest(path)
    layers = []
    for entry in manifest["layers"]:
        out_dim, in_dim = int(entry["out_dim"]), int(entry["in_dim"])
        n_w = out_dim * in_dim
        n_total = n_w + (out_dim if entry["has_bias"] else 0)
        blob = (path / entry["file"]).read_bytes()
        if len(blob) != 8 * n_total:
            raise CheckpointError(
                f"{path / entry['file']}: expected {8 * n_total} bytes, found {len(blob)}"
            )
        values = np.frombuffer(blob, dtype="<f8").astype(np.float64)
        bias = values[n_w:].copy() if entry["has_bias"] else None
        layers.append(Layer(values[:n_w].reshape(out_dim, in_dim).copy(), bias, entry["activation"]))
    try:
        net = Network(layers)
    except ValueError as exc:
        raise CheckpointError(f"{path}: {exc}") from exc
    if net.dims != manifest["dims"]:
        raise CheckpointError(f"{path}: layer blobs give dims {net.dims}, manifest says {manifest['dims']}")
    return net

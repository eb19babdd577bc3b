import os
from pathlib import Path

import numpy as np
import pytest

from mpsplit.config import MNIST_FILES
from mpsplit.dataio import load_mnist

MNIST_DIR = Path(os.environ.get("MPSPLIT_MNIST_DIR", "/root/data/mnist"))


def have_mnist():
    return all((MNIST_DIR / name).exists() for name in MNIST_FILES.values())


needs_mnist = pytest.mark.skipif(not have_mnist(), reason=f"MNIST IDX files not found in {MNIST_DIR}")


@pytest.fixture(scope="session")
def mnist_dir():
    if not have_mnist():
        pytest.skip(f"MNIST IDX files not found in {MNIST_DIR}")
    return MNIST_DIR


@pytest.fixture(scope="session")
def mnist(mnist_dir):
    train = load_mnist(mnist_dir / MNIST_FILES["train_images"], mnist_dir / MNIST_FILES["train_labels"])
    test = load_mnist(mnist_dir / MNIST_FILES["test_images"], mnist_dir / MNIST_FILES["test_labels"], "test")
    return train, test


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _write_idx(path, magic, dims, payload):
    import struct

    path.write_bytes(struct.pack(f">{1 + len(dims)}I", magic, *dims) + payload.tobytes())


@pytest.fixture(scope="session")
def tiny_mnist_dir(tmp_path_factory):
    """Small MNIST-format files: class k lights up a distinct horizontal band of pixels."""
    root = tmp_path_factory.mktemp("tiny_mnist")
    rng = np.random.default_rng(0)
    for prefix, n in (("train", 600), ("t10k", 200)):
        labels = rng.integers(0, 10, n).astype(np.uint8)
        img = rng.integers(0, 60, (n, 28, 28)).astype(np.int64)
        for i, k in enumerate(labels):
            img[i, 2 * k + 4: 2 * k + 6, :] += 180
        img = np.clip(img, 0, 255).astype(np.uint8)
        _write_idx(root / f"{prefix}-images-idx3-ubyte", 2051, (n, 28, 28), img)
        _write_idx(root / f"{prefix}-labels-idx1-ubyte", 2049, (n,), labels)
    return root


@pytest.fixture(scope="session")
def tiny_mnist(tiny_mnist_dir):
    train = load_mnist(tiny_mnist_dir / MNIST_FILES["train_images"], tiny_mnist_dir / MNIST_FILES["train_labels"])
    test = load_mnist(tiny_mnist_dir / MNIST_FILES["test_images"], tiny_mnist_dir / MNIST_FILES["test_labels"], "test")
    return train, test


FULL_ACCEPTANCE = os.environ.get("MPSPLIT_FULL_ACCEPTANCE") == "1"
ACCEPTANCE_RESULTS = {}
N_CRITERIA = 11


def pytest_collection_modifyitems(config, items):
    skip_full = pytest.mark.skip(reason="multi-hour run; set MPSPLIT_FULL_ACCEPTANCE=1")
    for item in items:
        if "full" in item.keywords and not FULL_ACCEPTANCE:
            item.add_marker(skip_full)
    config._acceptance_collected = any(item.module.__name__.endswith("test_acceptance") for item in items)


@pytest.fixture
def criterion():
    """Record and assert one acceptance criterion: ``criterion(n, ok, detail)``."""

    def record(n, ok, detail):
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_RESULTS[n] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    if not getattr(config, "_acceptance_collected", False):
        return
    terminalreporter.section("acceptance criteria")
    outcomes = {}
    for status in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            for n in range(1, N_CRITERIA + 1):
                if f"test_criterion_{n:02d}_" in nodeid:
                    outcomes.setdefault(n, status)
    for n in range(1, N_CRITERIA + 1):
        if n in ACCEPTANCE_RESULTS:
            line = ACCEPTANCE_RESULTS[n]
        elif outcomes.get(n) == "skipped":
            line = f"criterion {n:2d}: SKIP"
        elif n in outcomes:
            line = f"criterion {n:2d}: FAIL  (test {outcomes[n]} before reaching its check)"
        else:
            line = f"criterion {n:2d}: SKIP  (not collected)"
        terminalreporter.write_line(line)

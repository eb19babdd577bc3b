"""Figure rendering for reports. Every function writes one PNG and closes its figure."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .mp import mp_edges, mp_pdf  # noqa: E402

FIGSIZE = (6.4, 4.0)


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_esd(esd, bema, path, bins=80):
    """Histogram of the spectrum with the fitted MP density and the estimated edge."""
    params = mp_edges(bema.sigma_hat_sq, esd.aspect_c)
    ev = esd.eigenvalues
    fig, ax = plt.subplots(figsize=FIGSIZE)
    # clip the view so one huge spike does not flatten the bulk
    upper = max(1.5 * bema.lambda_plus, float(np.quantile(ev, 0.98)))
    shown = ev[ev <= upper]
    ax.hist(shown, bins=bins, density=True, color="tab:blue", alpha=0.6,
            weights=np.full(len(shown), len(shown) / len(ev)), label="ESD")
    xs = np.linspace(max(params.lambda_minus, 1e-12 * params.lambda_plus), params.lambda_plus, 400)
    ax.plot(xs, mp_pdf(xs, params), color="tab:red", lw=1.5,
            label=rf"MP fit $\hat\sigma^2$={bema.sigma_hat_sq:.4g}")
    ax.axvline(bema.lambda_plus, color="k", ls="--", lw=1, label=rf"$\lambda_+$={bema.lambda_plus:.4g}")
    n_out = int(np.count_nonzero(ev > upper))
    if n_out:
        ax.text(0.98, 0.95, f"{n_out} eigenvalue(s) beyond view", transform=ax.transAxes,
                ha="right", va="top", fontsize=8)
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("density")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def plot_training_curve(curve, path, title=None):
    epochs = curve.column("epoch")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(epochs, curve.column("test_acc"), label="test")
    ax1.plot(epochs, curve.column("train_acc"), label="train", alpha=0.7)
    ax1.set_xlabel("epoch")
    ax1.set_ylabel("accuracy")
    ax1.legend()
    ax2.plot(epochs, curve.column("param_count"), color="tab:green")
    ax2.set_xlabel("epoch")
    ax2.set_ylabel("parameters")
    if title:
        fig.suptitle(title, fontsize=10)
    return _finish(fig, path)


def plot_comparison(curves, path, title=None):
    """Test accuracy of several named runs on one axis."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for name, curve in curves.items():
        ax.plot(curve.column("epoch"), curve.column("test_acc"), label=name)
    ax.set_xlabel("epoch")
    ax.set_ylabel("test accuracy")
    ax.legend()
    if title:
        ax.set_title(title, fontsize=10)
    return _finish(fig, path)


def plot_parameter_sweep(rows, sweep, path, reference=None):
    rows = [r for r in rows if r["sweep"] == sweep]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for seed in sorted({r["seed"] for r in rows}):
        pts = [(r[sweep], r["lambda_plus"]) for r in rows if r["seed"] == seed]
        xs, ys = zip(*pts)
        ax.plot(xs, ys, marker="o", ms=3, label=f"seed {seed}")
    if reference is not None:
        ax.axhline(reference, color="tab:red", lw=1)
    ax.set_xlabel(sweep)
    ax.set_ylabel(r"estimated $\lambda_+$")
    if len({r["seed"] for r in rows}) <= 8:
        ax.legend(fontsize=8)
    return _finish(fig, path)


def plot_truncation(rows, mp_rank, baseline, path):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot([r["rank"] for r in rows], [r["test_acc"] for r in rows], marker="o", ms=3)
    if mp_rank > 0:
        ax.axvline(mp_rank, color="tab:red", lw=1, label=f"MP threshold ({mp_rank})")
    ax.axhline(baseline, color="gray", ls=":", lw=1, label="untruncated")
    ax.set_xscale("log")
    ax.set_xlabel("singular values kept")
    ax.set_ylabel("test accuracy")
    ax.legend(fontsize=8)
    return _finish(fig, path)

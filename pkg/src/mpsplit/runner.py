"""Experiment orchestration: training with periodic MP-guided splits, layer analysis,
synthetic edge-estimation studies and truncation sweeps.

Each ``run_*`` function writes its artifacts into ``cfg.out`` and returns the
in-memory result.
"""

import copy
import csv
import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import plotting
from .bema import BemaConfig, bema_fit, goodness_of_fit, spike_count
from .config import to_dict
from .dataio import SpikedMatrixSpec, gen_spiked, load_checkpoint, load_mnist, save_checkpoint
from .errors import ConfigError, DataError, NumericalError
from .nn import Layer, evaluate, init_network, param_count, replace_layer, sgd_step
from .spectral import symmetrized_spectrum
from .svdprune import decompose, plan_split, split, split_param_count, truncate

log = logging.getLogger(__name__)

CURVE_HEADER = ("epoch", "train_acc", "test_acc", "train_loss", "param_count", "splits")


@dataclass
class LayerAnalysis:
    index: int
    shape: tuple
    m: int
    sigma_hat_sq: float = None
    lambda_plus: float = None
    n_spikes: int = None
    n_small: int = None
    s_statistic: float = None
    passed: bool = None
    rank_kept: int = None
    params_before: int = None
    params_after: int = None
    accepted: bool = False
    error: str = None


@dataclass
class EpochRecord:
    epoch: int
    train_acc: float
    test_acc: float
    train_loss: float
    param_count: int
    splits: int
    dims: list = field(default_factory=list)
    layers: list = field(default_factory=list)

    def csv_row(self):
        # repr keeps every bit of the floats so replays can be diffed exactly
        return [self.epoch, repr(self.train_acc), repr(self.test_acc), repr(self.train_loss),
                self.param_count, self.splits]


@dataclass
class TrainingCurve:
    records: list = field(default_factory=list)

    def column(self, name):
        return [getattr(r, name) for r in self.records]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CURVE_HEADER)
            for rec in self.records:
                writer.writerow(rec.csv_row())


def read_curve_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        {
            "epoch": int(r["epoch"]),
            "train_acc": float(r["train_acc"]),
            "test_acc": float(r["test_acc"]),
            "train_loss": float(r["train_loss"]),
            "param_count": int(r["param_count"]),
            "splits": int(r["splits"]),
        }
        for r in rows
    ]


def analyze_matrix(w, bema_config, gamma, removal_fraction, index=0):
    """Spectrum, edge, fit and split plan for one weight matrix.

    Returns ``(LayerAnalysis, esd, bema_result, decision)``. Numerical
    failures propagate; callers decide whether to skip the layer.
    """
    info = LayerAnalysis(index=index, shape=tuple(np.shape(w)), m=int(min(np.shape(w))))
    esd = symmetrized_spectrum(w)
    result = bema_fit(esd, bema_config)
    fit = goodness_of_fit(esd, result, gamma)
    decision = plan_split(w, esd, result, fit, removal_fraction)
    info.sigma_hat_sq = result.sigma_hat_sq
    info.lambda_plus = result.lambda_plus
    info.n_spikes = spike_count(esd, result)
    info.n_small = decision.n_small
    info.s_statistic = fit.s_statistic
    info.passed = fit.passed
    info.rank_kept = decision.rank_kept
    info.params_before = decision.params_before
    info.params_after = decision.params_after
    info.accepted = decision.accepted
    return info, esd, result, decision


def split_cycle(net, bema_config, gamma, removal_fraction):
    """Analyze every layer in order and split the accepted ones in place.

    Factors produced in this cycle are not revisited until the next one.
    """
    infos = []
    k = 0
    while k < len(net.layers):
        layer = net.layers[k]
        try:
            info, _, _, decision = analyze_matrix(layer.weights, bema_config, gamma, removal_fraction, k)
        except (NumericalError, ValueError) as exc:
            log.warning("layer %d %s skipped: %s", k, layer.weights.shape, exc)
            infos.append(LayerAnalysis(index=k, shape=layer.weights.shape,
                                       m=min(layer.weights.shape), error=str(exc)))
            k += 1
            continue
        infos.append(info)
        if decision.accepted:
            try:
                result = split(layer.weights, layer.bias, decision,
                               decompose(layer.weights, full_matrices=False))
            except NumericalError as exc:
                log.warning("layer %d split skipped: %s", k, exc)
                info.accepted = False
                info.error = str(exc)
                k += 1
                continue
            before = param_count(net)
            replace_layer(net, k, result)
            if param_count(net) >= before:
                raise AssertionError("accepted split did not reduce the parameter count")
            log.info("split layer %d %s -> rank %d (s=%.4f)", k, info.shape, decision.rank_kept,
                     info.s_statistic)
            k += 2
        else:
            k += 1
    return infos


def load_datasets(cfg):
    train = load_mnist(cfg.train_images, cfg.train_labels, "train").head(cfg.train_limit)
    test = load_mnist(cfg.test_images, cfg.test_labels, "test").head(cfg.test_limit)
    return train, test


def train(cfg, train_set, test_set, on_epoch=None):
    """Train per ``cfg``; returns ``(net, TrainingCurve)``. Writes nothing."""
    net = init_network(cfg.dims, cfg.seed)
    shuffle_rng = np.random.default_rng([cfg.seed, 1])
    bema_config = BemaConfig(cfg.alpha, cfg.beta)
    curve = TrainingCurve()
    n = len(train_set)
    for epoch in range(1, cfg.epochs + 1):
        order = shuffle_rng.permutation(n)
        loss_sum = 0.0
        correct = 0
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            loss, hits = sgd_step(net, train_set.images[idx], train_set.labels[idx], cfg.step_size)
            loss_sum += loss * len(idx)
            correct += hits
        infos = []
        n_splits = 0
        if cfg.split_enabled and epoch % cfg.split_period == 0:
            infos = split_cycle(net, bema_config, cfg.gamma, cfg.removal_fraction)
            n_splits = sum(1 for info in infos if info.accepted)
        rec = EpochRecord(
            epoch=epoch,
            train_acc=correct / n,
            test_acc=evaluate(net, test_set.images, test_set.labels),
            train_loss=loss_sum / n,
            param_count=param_count(net),
            splits=n_splits,
            dims=net.dims,
            layers=[asdict(i) for i in infos],
        )
        curve.records.append(rec)
        log.info("epoch %d loss %.4f train %.4f test %.4f params %d dims %s", epoch,
                 rec.train_loss, rec.train_acc, rec.test_acc, rec.param_count, rec.dims)
        if on_epoch is not None:
            on_epoch(rec, net)
    return net, curve


def run_training(cfg):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    train_set, test_set = load_datasets(cfg)
    net, curve = train(cfg, train_set, test_set)
    curve.write_csv(out / "curve.csv")
    save_checkpoint(net, out / "checkpoint", seed=cfg.seed, extra={"config": to_dict(cfg)})
    report = {
        "config": to_dict(cfg),
        "final_dims": net.dims,
        "final_param_count": param_count(net),
        "final_test_acc": curve.records[-1].test_acc if curve.records else None,
        "epochs": [asdict(r) for r in curve.records],
    }
    _write_json(out / "report.json", report)
    if cfg.figures and curve.records:
        plotting.plot_training_curve(curve, out / "curve.png", title=f"{cfg.mode} {cfg.dims}")
    return net, curve


def compare_modes(cfg, seeds, out):
    """Train split and non-split arms of ``cfg`` for each seed under ``out``.

    Each arm gets its own run directory ``<mode>_seed<seed>``. Returns a
    summary dict, also written to ``out/compare.json``.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    runs = []
    for seed in seeds:
        curves = {}
        for mode in ("non_split", "split"):
            arm = replace(cfg, seed=seed, mode=mode, out=str(out / f"{mode}_seed{seed}"))
            net, curve = run_training(arm)
            curves[mode] = curve
            runs.append({
                "seed": seed,
                "mode": mode,
                "out": arm.out,
                "final_test_acc": curve.records[-1].test_acc if curve.records else None,
                "final_param_count": param_count(net),
                "final_dims": net.dims,
            })
        if cfg.figures and all(c.records for c in curves.values()):
            plotting.plot_comparison(curves, out / f"compare_seed{seed}.png", title=f"seed {seed} {cfg.dims}")
    summary = {"config": to_dict(cfg), "seeds": list(seeds), "runs": runs}
    _write_json(out / "compare.json", summary)
    return summary


def _load_matrix(cfg):
    if cfg.matrix is not None:
        path = Path(cfg.matrix)
        try:
            if path.suffix == ".npy":
                w = np.load(path, allow_pickle=False)
            else:
                w = np.loadtxt(path, delimiter="," if path.suffix == ".csv" else None, ndmin=2)
        except (OSError, ValueError) as exc:
            raise DataError(f"cannot read matrix {path}: {exc}") from exc
        return np.asarray(w, dtype=np.float64), {"matrix": str(path)}
    net = load_checkpoint(cfg.checkpoint)
    if not 0 <= cfg.layer < len(net.layers):
        raise ConfigError(f"layer {cfg.layer} out of range for {len(net.layers)}-layer network")
    return net.layers[cfg.layer].weights, {"checkpoint": str(cfg.checkpoint), "layer": cfg.layer}


def esd_summary(esd):
    ev = esd.eigenvalues
    return {
        "m": esd.m,
        "n_normalizer": esd.n_normalizer,
        "aspect_c": esd.aspect_c,
        "min": float(ev[0]),
        "max": float(ev[-1]),
        "mean": float(ev.mean()),
        "quartiles": [float(x) for x in np.quantile(ev, [0.25, 0.5, 0.75])],
    }


def run_analyze(cfg):
    w, source = _load_matrix(cfg)
    try:
        w = np.asarray(w, dtype=np.float64)
        if w.ndim != 2 or w.size == 0 or not np.all(np.isfinite(w)):
            raise DataError(f"input is not a finite nonempty matrix (shape {w.shape})")
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    config = BemaConfig(cfg.alpha, cfg.beta)
    info, esd, result, decision = analyze_matrix(w, config, cfg.gamma, cfg.removal_fraction, cfg.layer)
    out_dim, in_dim = w.shape
    report = {
        "config": to_dict(cfg),
        "source": source,
        "shape": [out_dim, in_dim],
        "esd": esd_summary(esd),
        "sigma_hat_sq": result.sigma_hat_sq,
        "lambda_plus": result.lambda_plus,
        "n_spikes": info.n_spikes,
        "n_small": info.n_small,
        "fit": asdict(decision.fit),
        "split": {
            "rank_kept": decision.rank_kept,
            "removal_fraction": decision.removal_fraction,
            "params_before": decision.params_before,
            "params_after": decision.params_after,
            "mp_rank": info.n_spikes,
            "params_at_mp_rank": split_param_count(out_dim, in_dim, info.n_spikes) if info.n_spikes else None,
            "accepted": decision.accepted,
        },
    }
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "analysis.json", report)
    if cfg.figures:
        plotting.plot_esd(esd, result, out / "esd.png")
    return report


def _synth_row(sweep, seed, esd, config, gamma):
    result = bema_fit(esd, config)
    return {
        "sweep": sweep,
        "seed": seed,
        "alpha": config.alpha,
        "beta": config.beta,
        "sigma_hat_sq": result.sigma_hat_sq,
        "lambda_plus": result.lambda_plus,
        "spikes": spike_count(esd, result),
        "s_statistic": goodness_of_fit(esd, result, gamma).s_statistic,
    }


def run_synth(cfg):
    seeds = cfg.seeds if cfg.seeds else [cfg.seed]
    rows = []
    first_esd = None
    for seed in seeds:
        spec = SpikedMatrixSpec(n=cfg.n, seed=seed, noise_sigma=cfg.noise_sigma,
                                deterministic_part=cfg.deterministic_part, theta=cfg.theta)
        esd = symmetrized_spectrum(gen_spiked(spec))
        if first_esd is None:
            first_esd = esd
        for a in cfg.alpha_grid:
            rows.append(_synth_row("alpha", seed, esd, BemaConfig(a, cfg.beta), cfg.gamma))
        for b in cfg.beta_grid:
            rows.append(_synth_row("beta", seed, esd, BemaConfig(cfg.alpha, b), cfg.gamma))
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    reference = cfg.noise_sigma ** 2 * 4.0
    _write_json(out / "synth.json", {"config": to_dict(cfg), "reference_lambda_plus": reference,
                                     "rows": rows})
    if cfg.figures:
        plotting.plot_parameter_sweep(rows, "alpha", out / "alpha_sweep.png", reference)
        plotting.plot_parameter_sweep(rows, "beta", out / "beta_sweep.png", reference)
        plotting.plot_esd(first_esd, bema_fit(first_esd, BemaConfig(cfg.alpha, cfg.beta)),
                          out / "esd.png")
    return rows


def default_rank_grid(m, mp_rank):
    grid = {1, 2, 5, 10, 20, 50, 100, 200, 300, 400, 500, 750, 1000, 1500, 2000, 3000, m}
    if mp_rank > 0:
        grid.add(mp_rank)
    return sorted(r for r in grid if 1 <= r <= m)


def truncation_sweep(net, layer_index, test_set, ranks=None, bema_config=BemaConfig()):
    """Accuracy after truncating one layer to each rank, without retraining."""
    if not 0 <= layer_index < len(net.layers):
        raise ConfigError(f"layer {layer_index} out of range for {len(net.layers)}-layer network")
    layer = net.layers[layer_index]
    w = layer.weights
    m = min(w.shape)
    esd = symmetrized_spectrum(w)
    mp_rank = spike_count(esd, bema_fit(esd, bema_config))
    if ranks is None:
        ranks = default_rank_grid(m, mp_rank)
    factors = decompose(w, full_matrices=False)
    rows = []
    for r in ranks:
        r = int(r)
        if not 1 <= r <= m:
            raise ValueError(f"rank {r} outside [1, {m}]; rank 0 would disconnect the network")
        w_first, w_second = truncate(w, r, factors)
        trial = copy.copy(net)
        trial.layers = list(net.layers)
        trial.layers[layer_index:layer_index + 1] = [
            Layer(w_first, None, "none"),
            Layer(w_second, layer.bias, layer.activation),
        ]
        rows.append({
            "rank": r,
            "test_acc": evaluate(trial, test_set.images, test_set.labels),
            "layer_params": split_param_count(*w.shape, r),
            "is_mp_threshold": int(r == mp_rank),
        })
    return rows, mp_rank


def run_truncation_sweep(cfg):
    net = load_checkpoint(cfg.checkpoint)
    test_set = load_mnist(cfg.test_images, cfg.test_labels, "test").head(cfg.test_limit)
    rows, mp_rank = truncation_sweep(net, cfg.layer, test_set, cfg.ranks, BemaConfig(cfg.alpha, cfg.beta))
    baseline = evaluate(net, test_set.images, test_set.labels)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "truncation.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["rank", "test_acc", "layer_params", "is_mp_threshold"])
        writer.writeheader()
        writer.writerows(rows)
    layer = net.layers[cfg.layer]
    _write_json(out / "truncation.json", {
        "config": to_dict(cfg),
        "untruncated_test_acc": baseline,
        "layer_shape": list(layer.weights.shape),
        "layer_params": layer.n_params(),
        "mp_rank": mp_rank,
        "rows": rows,
    })
    if cfg.figures:
        plotting.plot_truncation(rows, mp_rank, baseline, out / "truncation.png")
    return rows, mp_rank, baseline


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, default=_json_default))


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serialisable: {type(o)}")

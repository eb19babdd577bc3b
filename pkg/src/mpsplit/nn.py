"""Dense ReLU network with softmax cross-entropy, trained by plain mini-batch SGD.

Weights are stored ``out x in`` and applied to row-major batches as
``x @ W.T + b``. Everything is float64.
"""

from dataclasses import dataclass, field

import numpy as np

ACTIVATIONS = ("relu", "none")
PROB_FLOOR = 1e-300


@dataclass
class Layer:
    weights: np.ndarray
    bias: np.ndarray | None
    activation: str = "relu"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 2:
            raise ValueError("weights must be a 2-D matrix")
        if self.bias is None:
            # input-side factor of a split layer carries no bias
            return
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError(
                f"bias length {self.bias.shape} does not match out_dim {self.weights.shape[0]}"
            )

    @property
    def out_dim(self):
        return self.weights.shape[0]

    @property
    def in_dim(self):
        return self.weights.shape[1]

    def n_params(self):
        return self.weights.size + (0 if self.bias is None else self.bias.size)


@dataclass
class Network:
    layers: list = field(default_factory=list)

    def __post_init__(self):
        check_chain(self.layers)

    @property
    def dims(self):
        """Architecture signature, e.g. ``[784, 1000, 10]``."""
        if not self.layers:
            return []
        return [self.layers[0].in_dim] + [layer.out_dim for layer in self.layers]

    def __len__(self):
        return len(self.layers)


def check_chain(layers):
    for k in range(1, len(layers)):
        if layers[k].in_dim != layers[k - 1].out_dim:
            raise ValueError(
                f"layer {k} expects {layers[k].in_dim} inputs but layer {k - 1} "
                f"produces {layers[k - 1].out_dim}"
            )


def init_network(dims, seed):
    """Uniform ``[-1/sqrt(n), 1/sqrt(n)]`` init with ``n`` the layer's input size."""
    dims = [int(d) for d in dims]
    if len(dims) < 2 or min(dims) < 1:
        raise ValueError(f"invalid architecture {dims}")
    rng = np.random.default_rng(seed)
    layers = []
    for k, (n_in, n_out) in enumerate(zip(dims[:-1], dims[1:])):
        bound = 1.0 / np.sqrt(n_in)
        w = rng.uniform(-bound, bound, size=(n_out, n_in))
        b = rng.uniform(-bound, bound, size=n_out)
        act = "none" if k == len(dims) - 2 else "relu"
        layers.append(Layer(w, b, act))
    return Network(layers)


def _forward_cache(net, x):
    acts = [x]
    pre = []
    for layer in net.layers:
        z = acts[-1] @ layer.weights.T
        if layer.bias is not None:
            z += layer.bias
        pre.append(z)
        acts.append(np.maximum(z, 0.0) if layer.activation == "relu" else z)
    return acts, pre


def forward(net, x):
    """Logits for one input vector or a batch of row vectors."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != net.layers[0].in_dim:
        raise ValueError(f"input has {x.shape[-1]} features, network expects {net.layers[0].in_dim}")
    out = x
    for layer in net.layers:
        out = out @ layer.weights.T
        if layer.bias is not None:
            out = out + layer.bias
        if layer.activation == "relu":
            out = np.maximum(out, 0.0)
    return out


def softmax(logits):
    z = np.asarray(logits, dtype=np.float64)
    z = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=-1, keepdims=True)


def cross_entropy(probs, labels):
    probs = np.atleast_2d(np.asarray(probs, dtype=np.float64))
    labels = np.atleast_1d(np.asarray(labels))
    picked = probs[np.arange(len(labels)), labels]
    return float(-np.mean(np.log(np.maximum(picked, PROB_FLOOR))))


def gradients(net, x, labels):
    """Batch loss and per-layer ``(dW, db)`` of mean cross-entropy."""
    acts, pre = _forward_cache(net, x)
    probs = softmax(pre[-1])
    loss = cross_entropy(probs, labels)
    delta = probs
    delta[np.arange(len(labels)), labels] -= 1.0
    delta /= len(labels)
    grads = [None] * len(net.layers)
    for k in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[k]
        grads[k] = (delta.T @ acts[k], None if layer.bias is None else delta.sum(axis=0))
        if k > 0:
            delta = delta @ layer.weights
            if net.layers[k - 1].activation == "relu":
                delta *= pre[k - 1] > 0
    return loss, grads, pre[-1]


def sgd_step(net, x, labels, step_size):
    """One in-place SGD update; returns ``(loss, n_correct)`` on the batch before the step."""
    loss, grads, logits = gradients(net, x, labels)
    for layer, (dw, db) in zip(net.layers, grads):
        # gradients are fresh arrays, so scale them in place to skip a temporary
        dw *= step_size
        layer.weights -= dw
        if db is not None:
            db *= step_size
            layer.bias -= db
    correct = int(np.count_nonzero(np.argmax(logits, axis=1) == labels))
    return loss, correct


def predict(net, x, batch_size=2000):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(len(x), dtype=np.int64)
    for start in range(0, len(x), batch_size):
        out[start:start + batch_size] = np.argmax(forward(net, x[start:start + batch_size]), axis=1)
    return out


def evaluate(net, images, labels):
    """Accuracy of argmax predictions (ties go to the lowest class index)."""
    if len(labels) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    return float(np.mean(predict(net, images) == np.asarray(labels)))


def replace_layer(net, index, result):
    """Swap layer ``index`` for the two factor layers of ``result``, in place."""
    old = net.layers[index]
    if result.w_first.shape[1] != old.in_dim or result.w_second.shape[0] != old.out_dim:
        raise ValueError(
            f"split factors {result.w_second.shape}x{result.w_first.shape} do not match "
            f"layer {index} of shape {old.weights.shape}"
        )
    first = Layer(result.w_first, None, "none")
    second = Layer(result.w_second, result.bias, old.activation)
    net.layers[index:index + 1] = [first, second]
    return net


def param_count(net):
    return sum(layer.n_params() for layer in net.layers)


def param_count_for_dims(dims):
    return sum(a * b + b for a, b in zip(dims[:-1], dims[1:]))

"""Small feed-forward network engine with exact backpropagation.

The engine is plain numpy: parameters live in ``MlpParams``, the public
functions (``init_mlp``, ``forward``, ``backward``, ``train``, ``grad_check``)
are pure apart from RNG draws controlled by explicit seeds.  ``MlpRegressor``
and ``MlpBinaryClassifier`` wrap the engine behind the usual estimator
interface so trained surrogates compose with ordinary pipelines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

HIDDEN_ACTIVATIONS = ("relu", "tanh")
OUTPUT_ACTIVATIONS = ("identity", "sigmoid")
LOSSES = ("mae", "bce")
OPTIMIZERS = ("sgd", "adam")

# Probabilities are clamped to [BCE_CLIP, 1 - BCE_CLIP] inside the cross
# entropy so the loss stays finite at saturated predictions.
BCE_CLIP = 1e-7

# Pre-activations fed to the logistic are clamped so its output never rounds
# to exactly 0.0 or 1.0 in double precision.
_SIGMOID_Z_MAX = 36.0


@dataclass(frozen=True)
class MlpConfig:
    """Architecture description: layer widths plus activation choices."""

    layer_sizes: tuple[int, ...]
    hidden_activation: str = "relu"
    output_activation: str = "identity"
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        object.__setattr__(self, "layer_sizes", sizes)
        if len(sizes) < 2:
            raise ValueError("layer_sizes needs an input and an output layer")
        if any(s < 1 for s in sizes):
            raise ValueError("layer sizes must be >= 1, got %r" % (sizes,))
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ValueError("unknown hidden activation %r" % self.hidden_activation)
        if self.output_activation not in OUTPUT_ACTIVATIONS:
            raise ValueError("unknown output activation %r" % self.output_activation)


@dataclass
class MlpParams:
    """Per-layer weight matrices (fan_out x fan_in) and bias vectors."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def copy(self) -> "MlpParams":
        return MlpParams([w.copy() for w in self.weights],
                         [b.copy() for b in self.biases])


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer settings for one call to ``train``."""

    learning_rate: float = 1e-3
    epochs: int = 300
    minibatch_size: int = 32
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        # Rate zero is allowed so that a zero-step update can be asserted to
        # leave parameters untouched; negative rates are rejected.
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.minibatch_size < 1:
            raise ValueError("minibatch_size must be >= 1")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError("unknown optimizer %r" % self.optimizer)


def _as_matrix(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("%s must be 2-D, got shape %r" % (name, x.shape))
    if not np.all(np.isfinite(x)):
        raise ValueError("%s contains non-finite entries" % name)
    return x


def _sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.clip(z, -_SIGMOID_Z_MAX, _SIGMOID_Z_MAX)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _hidden_act(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _hidden_act_grad(z: np.ndarray, a: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return (z > 0).astype(float)
    return 1.0 - a * a


def init_mlp(config: MlpConfig) -> MlpParams:
    """Draw initial parameters for the given architecture.

    Weights are zero-mean Gaussian scaled by fan-in (He scaling for relu,
    Xavier scaling for tanh); biases start at zero.  The draw is a pure
    function of ``config.seed``.
    """
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(config.layer_sizes[:-1], config.layer_sizes[1:]):
        if config.hidden_activation == "relu":
            scale = np.sqrt(2.0 / fan_in)
        else:
            scale = np.sqrt(1.0 / fan_in)
        weights.append(rng.standard_normal((fan_out, fan_in)) * scale)
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases)


def _forward_cached(params: MlpParams, config: MlpConfig, x: np.ndarray):
    """Run the network keeping post-activation values of every layer."""
    acts = [x]
    pre = []
    n_layers = len(params.weights)
    a = x
    for l in range(n_layers):
        z = a @ params.weights[l].T + params.biases[l]
        pre.append(z)
        if l < n_layers - 1:
            a = _hidden_act(z, config.hidden_activation)
        elif config.output_activation == "sigmoid":
            a = _sigmoid(z)
        else:
            a = z
        acts.append(a)
    return pre, acts


def forward(params: MlpParams, config: MlpConfig, x) -> np.ndarray:
    """Batched forward pass; rows are samples."""
    x = _as_matrix(x, "input")
    if x.shape[1] != config.layer_sizes[0]:
        raise ValueError("input has %d columns, network expects %d"
                         % (x.shape[1], config.layer_sizes[0]))
    return _forward_cached(params, config, x)[1][-1]


def mae_loss(pred, target) -> float:
    """Mean absolute error over all entries."""
    pred = _as_matrix(pred, "pred")
    target = _as_matrix(target, "target")
    if pred.shape != target.shape:
        raise ValueError("shape mismatch %r vs %r" % (pred.shape, target.shape))
    return float(np.mean(np.abs(pred - target)))


def bce_loss(pred, target) -> float:
    """Mean binary cross entropy; predictions are clamped before the log."""
    pred = _as_matrix(pred, "pred")
    target = _as_matrix(target, "target")
    if pred.shape != target.shape:
        raise ValueError("shape mismatch %r vs %r" % (pred.shape, target.shape))
    if not np.all((target == 0.0) | (target == 1.0)):
        raise ValueError("bce targets must be 0 or 1")
    p = np.clip(pred, BCE_CLIP, 1.0 - BCE_CLIP)
    return float(np.mean(-(target * np.log(p) + (1.0 - target) * np.log1p(-p))))


def _loss_value(pred: np.ndarray, target: np.ndarray, loss: str) -> float:
    if loss == "mae":
        return mae_loss(pred, target)
    return bce_loss(pred, target)


def _loss_and_grads(params: MlpParams, config: MlpConfig,
                    x: np.ndarray, y: np.ndarray, loss: str):
    """Forward/backward sweep returning (loss value, gradients)."""
    pre, acts = _forward_cached(params, config, x)
    out = acts[-1]
    value = _loss_value(out, y, loss)
    n = y.size

    if loss == "mae":
        # Subgradient of |.| at zero is taken as zero.
        d_out = np.sign(out - y) / n
    else:
        p = np.clip(out, BCE_CLIP, 1.0 - BCE_CLIP)
        # Flat regions introduced by the clamp carry no gradient.
        live = (out > BCE_CLIP) & (out < 1.0 - BCE_CLIP)
        d_out = (-(y / p) + (1.0 - y) / (1.0 - p)) / n * live

    if config.output_activation == "sigmoid":
        delta = d_out * out * (1.0 - out)
    else:
        delta = d_out

    n_layers = len(params.weights)
    d_w = [None] * n_layers
    d_b = [None] * n_layers
    for l in range(n_layers - 1, -1, -1):
        d_w[l] = delta.T @ acts[l]
        d_b[l] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ params.weights[l]) * _hidden_act_grad(
                pre[l - 1], acts[l], config.hidden_activation)
    return value, MlpParams(d_w, d_b)


def backward(params: MlpParams, config: MlpConfig, x, y, loss: str) -> MlpParams:
    """Exact gradient of the mean loss with respect to every weight and bias."""
    x = _as_matrix(x, "input")
    y = _as_matrix(y, "target")
    if loss not in LOSSES:
        raise ValueError("unknown loss %r" % loss)
    return _loss_and_grads(params, config, x, y, loss)[1]


def train(params: MlpParams, config: MlpConfig, x, y,
          tcfg: TrainConfig, loss: str = "mae"):
    """Minibatch first-order training.

    Runs ``epochs`` passes over the data, each split into
    ``ceil(N / minibatch_size)`` optimizer steps on a freshly shuffled order.
    Returns updated parameters and the per-epoch mean training loss; the
    input ``params`` object is not modified.
    """
    x = _as_matrix(x, "input")
    y = _as_matrix(y, "target")
    if x.shape[0] != y.shape[0]:
        raise ValueError("inputs and targets disagree on sample count")
    if x.shape[0] == 0:
        raise ValueError("training set is empty")
    if loss not in LOSSES:
        raise ValueError("unknown loss %r" % loss)

    out = params.copy()
    if tcfg.epochs == 0:
        return out, []

    rng = np.random.default_rng(tcfg.seed)
    n = x.shape[0]
    mb = min(tcfg.minibatch_size, n)
    adam = tcfg.optimizer == "adam"
    if adam:
        m_w = [np.zeros_like(w) for w in out.weights]
        v_w = [np.zeros_like(w) for w in out.weights]
        m_b = [np.zeros_like(b) for b in out.biases]
        v_b = [np.zeros_like(b) for b in out.biases]
        step = 0

    history = []
    for _ in range(tcfg.epochs):
        order = rng.permutation(n)
        batch_losses = []
        for start in range(0, n, mb):
            idx = order[start:start + mb]
            value, grads = _loss_and_grads(out, config, x[idx], y[idx], loss)
            batch_losses.append(value)
            if adam:
                step += 1
                c1 = 1.0 - tcfg.beta1 ** step
                c2 = 1.0 - tcfg.beta2 ** step
                for l in range(len(out.weights)):
                    for cur, g, m, v in ((out.weights[l], grads.weights[l], m_w[l], v_w[l]),
                                         (out.biases[l], grads.biases[l], m_b[l], v_b[l])):
                        m *= tcfg.beta1
                        m += (1.0 - tcfg.beta1) * g
                        v *= tcfg.beta2
                        v += (1.0 - tcfg.beta2) * g * g
                        cur -= tcfg.learning_rate * (m / c1) / (np.sqrt(v / c2) + tcfg.eps)
            else:
                for l in range(len(out.weights)):
                    out.weights[l] -= tcfg.learning_rate * grads.weights[l]
                    out.biases[l] -= tcfg.learning_rate * grads.biases[l]
        history.append(float(np.mean(batch_losses)))

    for w in out.weights + out.biases:
        if not np.all(np.isfinite(w)):
            raise ValueError("training diverged to non-finite parameters")
    return out, history


# Absolute disagreement below this is indistinguishable from roundoff: the
# central difference of an O(1) loss at h=1e-6 carries ~1e-10 of float noise
# (one ulp of the loss divided by 2h), e.g. along an exactly-flat direction
# of a relu network under absolute error where the true gradient is zero.
GRAD_CHECK_NOISE_FLOOR = 1e-9


def grad_check(params: MlpParams, config: MlpConfig, x, y,
               loss: str = "mae", h: float = 1e-6) -> float:
    """Compare analytic gradients against central finite differences.

    Returns the maximum relative error over every parameter coordinate,
    with the relative scale floored at 1e-8.  Coordinates whose absolute
    disagreement is under GRAD_CHECK_NOISE_FLOOR count as agreeing.
    """
    if not (1e-6 <= h <= 1e-4):
        raise ValueError("step size h must lie in [1e-6, 1e-4]")
    x = _as_matrix(x, "input")
    y = _as_matrix(y, "target")
    analytic = backward(params, config, x, y, loss)
    work = params.copy()

    def loss_at() -> float:
        return _loss_value(forward(work, config, x), y, loss)

    worst = 0.0
    for kind in ("weights", "biases"):
        arrays = getattr(work, kind)
        grads = getattr(analytic, kind)
        for arr, g in zip(arrays, grads):
            flat = arr.ravel()
            gflat = g.ravel()
            for i in range(flat.size):
                keep = flat[i]
                flat[i] = keep + h
                up = loss_at()
                flat[i] = keep - h
                down = loss_at()
                flat[i] = keep
                fd = (up - down) / (2.0 * h)
                gap = abs(gflat[i] - fd)
                if gap <= GRAD_CHECK_NOISE_FLOOR:
                    continue
                denom = max(abs(gflat[i]), abs(fd), 1e-8)
                worst = max(worst, gap / denom)
    return worst


def _derive_seed(*parts) -> int:
    """Stable integer mix used wherever one base seed fans out into streams."""
    return int(np.random.SeedSequence(tuple(int(p) for p in parts)).generate_state(1)[0])


class _MlpBase(BaseEstimator):
    """Shared fit machinery for the two estimator front-ends."""

    _output_activation = "identity"
    _loss = "mae"

    def __init__(self, hidden_layer_sizes=(64, 64), activation="relu",
                 learning_rate=1e-3, epochs=300, batch_size=32,
                 optimizer="adam", warm_start=False, random_state=0):
        self.hidden_layer_sizes = hidden_layer_sizes
        self.activation = activation
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.optimizer = optimizer
        self.warm_start = warm_start
        self.random_state = random_state

    def _fit_raw(self, x: np.ndarray, y: np.ndarray):
        x = check_array(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if y.ndim == 1:
            y = y.reshape(-1, 1)
        cfg = MlpConfig(
            layer_sizes=(x.shape[1],) + tuple(self.hidden_layer_sizes) + (y.shape[1],),
            hidden_activation=self.activation,
            output_activation=self._output_activation,
            seed=_derive_seed(self.random_state, 0),
        )
        fresh = not (self.warm_start and hasattr(self, "params_")
                     and self.config_ == cfg)
        if fresh:
            self.config_ = cfg
            self.params_ = init_mlp(cfg)
            self._fit_count = 0
        self._fit_count += 1
        tcfg = TrainConfig(
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            minibatch_size=self.batch_size,
            optimizer=self.optimizer,
            seed=_derive_seed(self.random_state, self._fit_count),
        )
        self.params_, self.loss_history_ = train(
            self.params_, self.config_, x, y, tcfg, loss=self._loss)
        self.n_features_in_ = x.shape[1]
        return self

    def _forward(self, x) -> np.ndarray:
        check_is_fitted(self, "params_")
        x = check_array(x, dtype=float)
        return forward(self.params_, self.config_, x)


class MlpRegressor(_MlpBase, RegressorMixin):
    """Identity-output network trained on mean absolute error."""

    _output_activation = "identity"
    _loss = "mae"

    def fit(self, x, y):
        return self._fit_raw(x, y)

    def predict(self, x) -> np.ndarray:
        out = self._forward(x)
        return out.ravel() if out.shape[1] == 1 else out


class MlpBinaryClassifier(_MlpBase, ClassifierMixin):
    """Sigmoid-output network trained on binary cross entropy."""

    _output_activation = "sigmoid"
    _loss = "bce"

    def __init__(self, hidden_layer_sizes=(32,), activation="relu",
                 learning_rate=1e-3, epochs=300, batch_size=32,
                 optimizer="adam", warm_start=False, random_state=0):
        super().__init__(hidden_layer_sizes, activation, learning_rate,
                         epochs, batch_size, optimizer, warm_start, random_state)

    def fit(self, x, y):
        y = np.asarray(y, dtype=float).ravel()
        if not np.all((y == 0.0) | (y == 1.0)):
            raise ValueError("labels must be 0 or 1")
        self.classes_ = np.array([0, 1])
        return self._fit_raw(x, y)

    def predict_proba(self, x) -> np.ndarray:
        p = self._forward(x).ravel()
        return np.column_stack([1.0 - p, p])

    def predict(self, x) -> np.ndarray:
        return (self.predict_proba(x)[:, 1] >= 0.5).astype(int)

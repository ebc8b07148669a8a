"""Adam, the epoch loop with early stopping, and the repeated-run protocol."""

import json
import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .data import make_batches
from .errors import ConfigError, EmoGruError, NumericalError
from .evaluation import compute_metrics, confusion
from .features import TASK_LABELS
from .layers import ModelParams, model_backward, model_forward
from .tensor import make_rng

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    max_epochs: int = 30
    batch_size: int = 32
    lr: float = 0.001
    dropout: float = 0.2
    patience: int = 2
    early_stopping: bool = True
    seed: int = 0
    runs: int = 5
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        for name in ("max_epochs", "batch_size", "patience", "runs"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.lr <= 0:
            raise ConfigError("lr must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError("dropout must be in [0, 1)")


# ---------------------------------------------------------------- Adam

@dataclass
class AdamState:
    m: dict
    v: dict
    step: int = 0
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, arrays, lr=0.001, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls({k: np.zeros_like(a) for k, a in arrays.items()},
                   {k: np.zeros_like(a) for k, a in arrays.items()}, 0, lr, beta1, beta2, eps)


def adam_step(params, grads, state):
    """Bias-corrected Adam update, applied in place.

    ``params`` is a :class:`ModelParams` or a plain ``name -> array`` dict.
    Nothing is modified if any gradient is non-finite.
    """
    arrays = params.arrays if isinstance(params, ModelParams) else params
    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"non-finite gradient for parameter {name!r}")
    state.step += 1
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1 ** state.step
    bc2 = 1.0 - b2 ** state.step
    for name, g in grads.items():
        m, v = state.m[name], state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        arrays[name] -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
    return params, state


# ---------------------------------------------------------------- early stopping

class EarlyStopper:
    """Stop once the dev loss has gone up ``patience`` epochs in a row, each
    compared with the epoch right before it."""

    def __init__(self, patience=2):
        self.patience = patience
        self.losses = []
        self.rises = 0

    def update(self, loss):
        if self.losses and loss > self.losses[-1]:
            self.rises += 1
        else:
            self.rises = 0
        self.losses.append(loss)
        return self.rises >= self.patience

    @property
    def best_epoch(self):
        # 1-based, first minimum
        return int(np.argmin(self.losses)) + 1


# ---------------------------------------------------------------- loop

@dataclass
class TrainHistory:
    train_loss: list = field(default_factory=list)
    dev_loss: list = field(default_factory=list)
    dev_metrics: list = field(default_factory=list)
    wall_time: list = field(default_factory=list)
    stop_reason: str = ""
    best_epoch: int = 0

    @property
    def epochs(self):
        return len(self.dev_loss)

    def records(self, with_time=True):
        """One dict per epoch, then a closing summary record."""
        out = []
        for i in range(self.epochs):
            rec = {"epoch": i + 1, "train_loss": self.train_loss[i],
                   "dev_loss": self.dev_loss[i], "dev_metrics": self.dev_metrics[i]}
            if with_time:
                rec["wall_time"] = self.wall_time[i]
            out.append(rec)
        out.append({"event": "end", "stop_reason": self.stop_reason,
                    "best_epoch": self.best_epoch, "epochs": self.epochs})
        return out

    def write_jsonl(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records():
                fh.write(json.dumps(rec, sort_keys=True) + "\n")


def predict_proba(params, data, chunk=256):
    out = []
    for start in range(0, len(data), chunk):
        sub = data.features[start:start + chunk]
        probs, _ = model_forward(sub, params, "eval")
        out.append(np.atleast_2d(probs))
    return np.concatenate(out)


def evaluate(params, data):
    """``(mean loss, predicted indices, Metrics)`` in eval mode."""
    probs = predict_proba(params, data)
    pred = probs.argmax(axis=1)
    loss = float(-np.mean(np.log(probs[np.arange(len(data)), data.labels])))
    if not np.isfinite(loss):
        raise NumericalError("non-finite evaluation loss")
    cm = confusion([TASK_LABELS[i] for i in pred], [TASK_LABELS[i] for i in data.labels])
    return loss, pred, compute_metrics(cm)


def train_epoch(params, state, data, cfg, epoch):
    """One pass over ``data`` in shuffled mini-batches; returns the mean loss."""
    rng = make_rng(cfg.seed, "dropout", epoch)
    total = 0.0
    batches = make_batches(range(len(data)), cfg.batch_size, cfg.seed, True, epoch)
    for b, idx in enumerate(batches):
        sub = data.features[np.asarray(idx)]
        _, cache = model_forward(sub, params, "train", rng)
        loss, grads = model_backward(cache, data.labels[idx], params)
        if not np.isfinite(loss):
            raise NumericalError(f"non-finite loss at epoch {epoch}, batch {b}")
        try:
            adam_step(params, grads, state)
        except NumericalError as e:
            raise NumericalError(f"epoch {epoch}, batch {b}: {e}") from e
        total += loss * len(idx)
    return total / len(data)


def train(params, train_set, dev_set, cfg):
    """Train a copy of ``params``; return the best-dev-loss parameters and
    the history."""
    if len(train_set) == 0 or len(dev_set) == 0:
        raise EmoGruError("train and dev sets must be nonempty")
    params = params.copy()
    state = AdamState.fresh(params.arrays, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)
    stopper = EarlyStopper(cfg.patience)
    history = TrainHistory()
    best, best_loss = params.copy(), np.inf

    for epoch in range(1, cfg.max_epochs + 1):
        t0 = time.perf_counter()
        train_loss = train_epoch(params, state, train_set, cfg, epoch)
        dev_loss, _, metrics = evaluate(params, dev_set)
        history.train_loss.append(train_loss)
        history.dev_loss.append(dev_loss)
        history.dev_metrics.append(metrics.flat())
        history.wall_time.append(time.perf_counter() - t0)
        log.info("epoch %d: train %.4f dev %.4f micro-f1 %.4f",
                 epoch, train_loss, dev_loss, metrics.micro_f1)
        if dev_loss < best_loss:
            best, best_loss = params.copy(), dev_loss
        if stopper.update(dev_loss) and cfg.early_stopping:
            history.stop_reason = "early_stop"
            break
    else:
        history.stop_reason = "max_epochs"
    history.best_epoch = stopper.best_epoch
    return best, history


# ---------------------------------------------------------------- repeated runs

def derive_run_seed(seed, run):
    return int(make_rng(seed, "run", run).integers(2 ** 62))


@dataclass
class RunResult:
    seed: int
    params: ModelParams
    history: TrainHistory
    metrics: dict


@dataclass
class ExperimentResult:
    runs: list
    mean: dict
    std: dict

    def summary(self):
        return {"runs": len(self.runs), "seeds": [r.seed for r in self.runs],
                "mean": self.mean, "std": self.std,
                "per_run": [r.metrics for r in self.runs]}


def aggregate(metric_dicts):
    """Mean and population standard deviation of every metric."""
    keys = list(metric_dicts[0])
    table = np.array([[m[k] for k in keys] for m in metric_dicts], dtype=np.float64)
    mean, std = table.mean(axis=0), table.std(axis=0)
    # n * x / n need not round back to x; identical runs must report exactly x and 0
    same = np.all(table == table[0], axis=0)
    mean = np.where(same, table[0], mean)
    std = np.where(same, 0.0, std)
    return dict(zip(keys, mean.tolist())), dict(zip(keys, std.tolist()))


def run_experiment(cfg, model_cfg, train_set, dev_set, test_set=None, n_runs=None,
                   run_seeds=None, embedding=None, on_run=None):
    """Train ``n_runs`` models from different seeds and aggregate their
    metrics on ``test_set`` (or ``dev_set`` when no test set is given).

    ``on_run(i, result)`` is called after each run, e.g. to save checkpoints.
    """
    n_runs = cfg.runs if n_runs is None else n_runs
    if n_runs < 1:
        raise ConfigError("n_runs must be >= 1")
    if run_seeds is None:
        run_seeds = [derive_run_seed(cfg.seed, i) for i in range(n_runs)]
    if len(run_seeds) != n_runs:
        raise ConfigError(f"{len(run_seeds)} seeds given for {n_runs} runs")
    model_cfg = replace(model_cfg, dropout_rate=cfg.dropout)
    target = test_set if test_set is not None else dev_set

    runs = []
    for i, seed in enumerate(run_seeds):
        try:
            init = ModelParams.init(model_cfg, seed, embedding)
            params, history = train(init, train_set, dev_set, replace(cfg, seed=seed))
            _, _, metrics = evaluate(params, target)
        except EmoGruError as e:
            raise type(e)(f"run {i} failed: {e}") from e
        result = RunResult(seed, params, history, metrics.flat())
        runs.append(result)
        if on_run is not None:
            on_run(i, result)
    mean, std = aggregate([r.metrics for r in runs])
    return ExperimentResult(runs, mean, std)

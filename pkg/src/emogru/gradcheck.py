"""Compare analytic gradients with central finite differences on a tiny model."""

from types import SimpleNamespace

import numpy as np

from .features import ABSENT
from .layers import ModelConfig, ModelParams, model_backward, model_forward
from .tensor import finite_diff_grad, make_rng

TINY = dict(vocab_size=12, emb_dim=8, hidden=5, att_dim=5, dense_width=7, dense_count=1,
            max_len=4, use_aux_features=True)


def relative_error(a, n):
    return np.abs(a - n) / np.maximum(1e-8, np.abs(a) + np.abs(n))


def tiny_problem(seed=0, **overrides):
    """A seeded tiny model, one input bundle with a padded last step, and a label."""
    cfg = ModelConfig(**{**TINY, **overrides})
    params = ModelParams.init(cfg, seed)
    rng = make_rng(seed, "gradcheck-input")
    T = cfg.max_len
    # the small init leaves very flat logits; perturb biases so every path is exercised
    for name, a in params.arrays.items():
        if name.split(".")[-1].startswith("b"):
            a[...] = rng.uniform(-0.5, 0.5, a.shape)
    ids = rng.integers(2, cfg.vocab_size, size=T)
    mask = np.ones(T)
    mask[-1] = 0.0
    ids[-1] = 0
    emo = np.where(rng.random(8) < 0.5, 1.0, ABSENT)
    fb = SimpleNamespace(token_ids=ids, mask=mask, sent=rng.uniform(-1, 1, T),
                         obj=rng.uniform(0, 1, T), emo=emo)
    gold = int(rng.integers(cfg.classes))
    return params, fb, gold


def gradient_check(seed=0, eps=1e-5, mode="train", **overrides):
    """Return ``(max_relative_error, per_parameter_max)``.

    Train mode is used so the dropout mask is on the gradient path; the mask is
    redrawn from the same seed on every evaluation, so it stays fixed.
    """
    params, fb, gold = tiny_problem(seed, **overrides)
    drop_seed = seed + 1

    def loss(theta):
        probs, _ = model_forward(fb, params.with_flat(theta), mode, make_rng(drop_seed))
        return -np.log(probs[gold])

    _, cache = model_forward(fb, params, mode, make_rng(drop_seed))
    _, grads = model_backward(cache, gold, params)
    analytic = np.concatenate([grads[k].ravel() for k in params.arrays])
    numeric = finite_diff_grad(loss, params.flat(), eps)
    err = relative_error(analytic, numeric)

    per_param, i = {}, 0
    for name, a in params.arrays.items():
        per_param[name] = float(err[i:i + a.size].max())
        i += a.size
    return float(err.max()), per_param

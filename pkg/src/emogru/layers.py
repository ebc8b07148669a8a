"""GRU + additive attention classifier with hand-derived gradients.

Pipeline for one example (all sizes from :class:`ModelConfig`)::

    token ids -> embedding -> GRU -> attention context
    [context, sent, obj, emo] -> dense(tanh) -> dropout -> dense(tanh) ... -> softmax

Everything operates on a leading batch axis internally; the single-example
entry points just add and strip that axis. Padding is handled with a 0/1 mask:
at masked steps the GRU carries its previous state forward unchanged and the
attention weight is exactly zero.

The GRU follows the gate orientation below, where the update gate ``z`` weighs
the *previous* state::

    r = sigmoid(W_r x + U_r h + b_r)
    z = sigmoid(W_z x + U_z h + b_z)
    c = tanh(W_h x + r * (U_h h) + b_h)
    h' = z * h + (1 - z) * c
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError, ShapeError
from .tensor import DTYPE, make_rng, sigmoid, softmax

EMO_DIM = 8


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    emb_dim: int = 300
    hidden: int = 70
    att_dim: int = 70
    dense_width: int = 300
    dense_count: int = 3
    classes: int = 4
    max_len: int = 70
    dropout_rate: float = 0.2
    use_aux_features: bool = True

    def __post_init__(self):
        for name in ("vocab_size", "emb_dim", "hidden", "att_dim", "dense_width",
                     "dense_count", "classes", "max_len"):
            if int(getattr(self, name)) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")

    @property
    def aux_width(self):
        # sentiment + objectivity per position, plus the lexicon presence vector
        return 2 * self.max_len + EMO_DIM if self.use_aux_features else 0

    @property
    def dense_input_width(self):
        return self.hidden + self.aux_width

    def to_dict(self):
        return asdict(self)


@dataclass
class GruParams:
    W_r: np.ndarray
    U_r: np.ndarray
    b_r: np.ndarray
    W_z: np.ndarray
    U_z: np.ndarray
    b_z: np.ndarray
    W_h: np.ndarray
    U_h: np.ndarray
    b_h: np.ndarray

    @property
    def hidden(self):
        return self.U_r.shape[0]

    @property
    def input_size(self):
        return self.W_r.shape[1]


@dataclass
class AttentionParams:
    W_a: np.ndarray
    b_a: np.ndarray
    v_a: np.ndarray


GRU_NAMES = ("W_r", "U_r", "b_r", "W_z", "U_z", "b_z", "W_h", "U_h", "b_h")
ATT_NAMES = ("W_a", "b_a", "v_a")


def param_shapes(cfg):
    """Ordered ``name -> shape`` for every trainable array."""
    H, D, A = cfg.hidden, cfg.emb_dim, cfg.att_dim
    shapes = {"embedding": (cfg.vocab_size, D)}
    for g in "rzh":
        shapes[f"gru.W_{g}"] = (H, D)
        shapes[f"gru.U_{g}"] = (H, H)
        shapes[f"gru.b_{g}"] = (H,)
    shapes["att.W_a"] = (A, H)
    shapes["att.b_a"] = (A,)
    shapes["att.v_a"] = (A,)
    width = cfg.dense_input_width
    for i in range(cfg.dense_count):
        shapes[f"dense.{i}.W"] = (cfg.dense_width, width)
        shapes[f"dense.{i}.b"] = (cfg.dense_width,)
        width = cfg.dense_width
    shapes["out.W"] = (cfg.classes, width)
    shapes["out.b"] = (cfg.classes,)
    return shapes


def glorot_uniform(shape, rng):
    if len(shape) == 1:
        fan_in, fan_out = 1, shape[0]
    else:
        fan_out, fan_in = shape
    s = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-s, s, size=shape).astype(DTYPE)


def init_array(name, shape, seed):
    # one independent stream per array, so e.g. the embedding can be
    # regenerated on its own when loading pretrained vectors
    if name.split(".")[-1].startswith("b"):
        return np.zeros(shape, dtype=DTYPE)
    return glorot_uniform(shape, make_rng(seed, name))


@dataclass
class ModelParams:
    config: ModelConfig
    arrays: dict = field(default_factory=dict)

    @classmethod
    def init(cls, cfg, seed=0, embedding=None):
        arrays = {name: init_array(name, shape, seed)
                  for name, shape in param_shapes(cfg).items()}
        if embedding is not None:
            embedding = np.asarray(embedding, dtype=DTYPE)
            if embedding.shape != arrays["embedding"].shape:
                raise ShapeError(f"embedding shape {embedding.shape} does not match "
                                 f"{arrays['embedding'].shape}")
            arrays["embedding"] = embedding.copy()
        return cls(cfg, arrays)

    def __post_init__(self):
        if self.arrays:
            self.validate()

    def validate(self):
        expected = param_shapes(self.config)
        if list(expected) != list(self.arrays):
            raise ShapeError(f"parameter names {list(self.arrays)} do not match config")
        for name, shape in expected.items():
            if self.arrays[name].shape != shape:
                raise ShapeError(f"{name}: expected shape {shape}, got {self.arrays[name].shape}")

    @property
    def embedding(self):
        return self.arrays["embedding"]

    @property
    def gru(self):
        return GruParams(**{k: self.arrays["gru." + k] for k in GRU_NAMES})

    @property
    def attention(self):
        return AttentionParams(**{k: self.arrays["att." + k] for k in ATT_NAMES})

    @property
    def dense(self):
        return [(self.arrays[f"dense.{i}.W"], self.arrays[f"dense.{i}.b"])
                for i in range(self.config.dense_count)]

    @property
    def output(self):
        return self.arrays["out.W"], self.arrays["out.b"]

    def copy(self):
        return ModelParams(self.config, {k: v.copy() for k, v in self.arrays.items()})

    def flat(self):
        return np.concatenate([a.ravel() for a in self.arrays.values()])

    def with_flat(self, theta):
        out, i = {}, 0
        for name, a in self.arrays.items():
            out[name] = np.asarray(theta[i:i + a.size], dtype=DTYPE).reshape(a.shape)
            i += a.size
        return ModelParams(self.config, out)

    def zeros_like(self):
        return {k: np.zeros_like(v) for k, v in self.arrays.items()}


# ---------------------------------------------------------------- GRU

def gru_cell_forward(x_t, h_prev, p):
    """One GRU step. Works on a single vector or a batch of row vectors.

    Returns ``(h_t, gates)`` where ``gates`` holds ``r``, ``z``, ``h_cand``
    and ``uh`` (the ``U_h h_prev`` product, kept for the backward pass).
    """
    x_t = np.asarray(x_t, dtype=DTYPE)
    h_prev = np.asarray(h_prev, dtype=DTYPE)
    if x_t.shape[-1] != p.input_size or h_prev.shape[-1] != p.hidden:
        raise ShapeError(f"GRU cell expects input {p.input_size} / hidden {p.hidden}, "
                         f"got {x_t.shape} / {h_prev.shape}")
    r = sigmoid(x_t @ p.W_r.T + h_prev @ p.U_r.T + p.b_r)
    z = sigmoid(x_t @ p.W_z.T + h_prev @ p.U_z.T + p.b_z)
    uh = h_prev @ p.U_h.T
    h_cand = np.tanh(x_t @ p.W_h.T + r * uh + p.b_h)
    h_t = z * h_prev + (1.0 - z) * h_cand
    return h_t, {"r": r, "z": z, "h_cand": h_cand, "uh": uh}


def _gru_forward_batch(X, mask, p, h0):
    B, T, _ = X.shape
    Hd = p.hidden
    H = np.empty((B, T, Hd))
    cache = {k: np.empty((B, T, Hd)) for k in ("r", "z", "h_cand", "uh", "h_prev")}
    h = np.broadcast_to(h0, (B, Hd)).astype(DTYPE)
    for t in range(T):
        h_new, gates = gru_cell_forward(X[:, t], h, p)
        m = mask[:, t, None]
        cache["h_prev"][:, t] = h
        for k, v in gates.items():
            cache[k][:, t] = v
        h = np.where(m > 0, h_new, h)
        H[:, t] = h
    return H, cache


def gru_forward(X, mask, p, h0=None):
    """Run the GRU over ``X`` (``T x input``, or ``B x T x input``).

    Masked steps copy the previous state, so trailing padding never changes the
    final state.
    """
    X = np.asarray(X, dtype=DTYPE)
    mask = np.asarray(mask, dtype=DTYPE)
    single = X.ndim == 2
    if single:
        X, mask = X[None], mask[None]
    if mask.shape != X.shape[:2]:
        raise ShapeError(f"mask shape {mask.shape} does not match sequence shape {X.shape[:2]}")
    if h0 is None:
        h0 = np.zeros(p.hidden)
    H, _ = _gru_forward_batch(X, mask, p, np.asarray(h0, dtype=DTYPE))
    return H[0] if single else H


# ---------------------------------------------------------------- attention

def _attention_batch(H, mask, p):
    if np.any(mask.sum(axis=1) == 0):
        raise ShapeError("attention over a fully masked sequence")
    u = np.tanh(H @ p.W_a.T + p.b_a)
    e = u @ p.v_a
    valid = mask > 0
    e_masked = np.where(valid, e, -np.inf)
    alpha = np.exp(e_masked - e_masked.max(axis=1, keepdims=True))
    alpha /= alpha.sum(axis=1, keepdims=True)
    context = np.einsum("bt,bth->bh", alpha, H)
    return context, alpha, u


def attention_forward(H, mask, p):
    """Additive self-attention: ``e_t = v . tanh(W h_t + b)``, softmax over
    unmasked steps. Returns ``(context, alpha)``."""
    H = np.asarray(H, dtype=DTYPE)
    mask = np.asarray(mask, dtype=DTYPE)
    single = H.ndim == 2
    if single:
        H, mask = H[None], mask[None]
    if mask.shape != H.shape[:2]:
        raise ShapeError(f"mask shape {mask.shape} does not match {H.shape[:2]}")
    context, alpha, _ = _attention_batch(H, mask, p)
    if single:
        return context[0], alpha[0]
    return context, alpha


# ---------------------------------------------------------------- dropout

def dropout(x, rate, mode, rng=None):
    """Inverted dropout. Returns ``(y, mask)`` where ``mask`` already carries
    the ``1 / (1 - rate)`` scale."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    x = np.asarray(x, dtype=DTYPE)
    if mode == "eval" or rate == 0.0:
        mask = np.ones_like(x)
        return x.copy(), mask
    if mode != "train":
        raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")
    keep = rng.random(x.shape) >= rate
    mask = keep / (1.0 - rate)
    return x * mask, mask


# ---------------------------------------------------------------- full model

@dataclass
class ForwardCache:
    mode: str
    token_ids: np.ndarray
    mask: np.ndarray
    X: np.ndarray
    H: np.ndarray
    gru: dict
    u: np.ndarray
    alpha: np.ndarray
    context: np.ndarray
    dense_in: list
    dense_out: list
    dropout_mask: np.ndarray
    probs: np.ndarray
    single: bool


def _as_batch(fb, cfg):
    ids = np.asarray(fb.token_ids)
    single = ids.ndim == 1
    arrs = [ids, np.asarray(fb.mask, dtype=DTYPE)]
    if cfg.use_aux_features:
        arrs += [np.asarray(fb.sent, dtype=DTYPE), np.asarray(fb.obj, dtype=DTYPE),
                 np.asarray(fb.emo, dtype=DTYPE)]
    if single:
        arrs = [a[None] for a in arrs]
    ids, mask = arrs[0].astype(np.int64), arrs[1]
    if mask.shape != ids.shape:
        raise ShapeError(f"mask shape {mask.shape} does not match token ids {ids.shape}")
    if np.any(ids < 0) or np.any(ids >= cfg.vocab_size):
        raise ShapeError("token id outside the vocabulary")
    aux = None
    if cfg.use_aux_features:
        sent, obj, emo = arrs[2:]
        if sent.shape[1] != cfg.max_len or obj.shape[1] != cfg.max_len or emo.shape[1] != EMO_DIM:
            raise ShapeError(f"aux features must be {cfg.max_len}/{cfg.max_len}/{EMO_DIM} wide, "
                             f"got {sent.shape[1]}/{obj.shape[1]}/{emo.shape[1]}")
        aux = np.concatenate([sent, obj, emo], axis=1)
    return ids, mask, aux, single


def model_forward(fb, params, mode="eval", rng=None):
    """Class probabilities for one bundle (or a stacked batch of bundles)."""
    cfg = params.config
    ids, mask, aux, single = _as_batch(fb, cfg)
    X = params.embedding[ids]
    H, gru_cache = _gru_forward_batch(X, mask, params.gru, np.zeros(cfg.hidden))
    context, alpha, u = _attention_batch(H, mask, params.attention)
    h = context if aux is None else np.concatenate([context, aux], axis=1)

    dense_in, dense_out, drop_mask = [], [], None
    for i, (W, b) in enumerate(params.dense):
        dense_in.append(h)
        h = np.tanh(h @ W.T + b)
        dense_out.append(h)
        if i == 0:
            h, drop_mask = dropout(h, cfg.dropout_rate, mode, rng)
    W_o, b_o = params.output
    dense_in.append(h)
    probs = softmax(h @ W_o.T + b_o)

    cache = ForwardCache(mode, ids, mask, X, H, gru_cache, u, alpha, context,
                         dense_in, dense_out, drop_mask, probs, single)
    return (probs[0] if single else probs), cache


def model_backward(cache, gold, params):
    """Cross-entropy loss and gradients for every parameter.

    For a batch, both loss and gradients are means over the examples.
    """
    cfg = params.config
    gold = np.atleast_1d(np.asarray(gold))
    probs = cache.probs
    B = probs.shape[0]
    if gold.shape != (B,) or not np.issubdtype(gold.dtype, np.integer):
        raise ValueError(f"gold must be {B} integer class index(es)")
    if np.any(gold < 0) or np.any(gold >= cfg.classes):
        raise ValueError(f"gold class index out of range [0, {cfg.classes})")

    rows = np.arange(B)
    loss = float(-np.mean(np.log(probs[rows, gold])))
    grads = params.zeros_like()

    d = probs.copy()
    d[rows, gold] -= 1.0
    d /= B
    W_o, _ = params.output
    grads["out.W"] = d.T @ cache.dense_in[-1]
    grads["out.b"] = d.sum(axis=0)
    dh = d @ W_o

    for i in reversed(range(cfg.dense_count)):
        if i == 0:
            dh = dh * cache.dropout_mask
        W, _ = params.dense[i]
        da = dh * (1.0 - cache.dense_out[i] ** 2)
        grads[f"dense.{i}.W"] = da.T @ cache.dense_in[i]
        grads[f"dense.{i}.b"] = da.sum(axis=0)
        dh = da @ W

    dcontext = dh[:, :cfg.hidden]
    dH = _attention_backward(dcontext, cache, params.attention, grads)
    dX = _gru_backward(dH, cache, params.gru, grads)
    np.add.at(grads["embedding"], cache.token_ids, dX)
    return loss, grads


def _attention_backward(dcontext, cache, p, grads):
    H, alpha, u = cache.H, cache.alpha, cache.u
    dH = alpha[:, :, None] * dcontext[:, None, :]
    dalpha = np.einsum("bth,bh->bt", H, dcontext)
    de = alpha * (dalpha - np.sum(alpha * dalpha, axis=1, keepdims=True))
    grads["att.v_a"] = np.einsum("bta,bt->a", u, de)
    da = de[:, :, None] * p.v_a * (1.0 - u ** 2)
    grads["att.W_a"] = np.einsum("bta,bth->ah", da, H)
    grads["att.b_a"] = da.sum(axis=(0, 1))
    dH += da @ p.W_a
    return dH


def _gru_backward(dH, cache, p, grads):
    g = cache.gru
    X, mask = cache.X, cache.mask
    B, T, _ = X.shape
    dX = np.zeros_like(X)
    acc = {k: np.zeros_like(getattr(p, k)) for k in GRU_NAMES}
    dh_next = np.zeros((B, p.hidden))
    for t in reversed(range(T)):
        m = mask[:, t, None]
        dh = dH[:, t] + dh_next
        h_prev, x = g["h_prev"][:, t], X[:, t]
        r, z, hc, uh = g["r"][:, t], g["z"][:, t], g["h_cand"][:, t], g["uh"][:, t]

        dh_new = m * dh
        dh_prev = (1.0 - m) * dh + dh_new * z
        dz = dh_new * (h_prev - hc)
        dac = dh_new * (1.0 - z) * (1.0 - hc ** 2)
        dr = dac * uh
        duh = dac * r
        dar = dr * r * (1.0 - r)
        daz = dz * z * (1.0 - z)

        acc["W_h"] += dac.T @ x
        acc["b_h"] += dac.sum(axis=0)
        acc["U_h"] += duh.T @ h_prev
        acc["W_r"] += dar.T @ x
        acc["U_r"] += dar.T @ h_prev
        acc["b_r"] += dar.sum(axis=0)
        acc["W_z"] += daz.T @ x
        acc["U_z"] += daz.T @ h_prev
        acc["b_z"] += daz.sum(axis=0)

        dX[:, t] = dac @ p.W_h + dar @ p.W_r + daz @ p.W_z
        dh_prev += duh @ p.U_h + dar @ p.U_r + daz @ p.U_z
        dh_next = dh_prev
    for k, v in acc.items():
        grads["gru." + k] = v
    return dX


def loss_and_probs(fb, gold, params, mode="eval", rng=None):
    probs, cache = model_forward(fb, params, mode, rng)
    gold = np.atleast_1d(np.asarray(gold))
    p = cache.probs[np.arange(len(gold)), gold]
    return float(-np.mean(np.log(p))), probs

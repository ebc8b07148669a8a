"""Dense float64 arithmetic used by the layers.

Arrays are plain ``numpy.ndarray`` objects of dtype float64. The helpers here
add the shape and finiteness checks the rest of the package relies on, plus a
stable softmax/sigmoid and a central-difference gradient used to verify every
hand-written backward pass.

Random streams come from :func:`make_rng`, which wraps numpy's PCG64 bit
generator. PCG64 output is fixed by its seed on every platform numpy supports.
"""

import zlib

import numpy as np

from .errors import NumericalError, ShapeError

DTYPE = np.float64


def make_rng(seed, *keys):
    """Return a PCG64-backed ``numpy.random.Generator``.

    Extra ``keys`` (ints or strings) derive an independent stream from the same
    seed, e.g. ``make_rng(seed, "gru.W_r")``.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for key in keys:
        if isinstance(key, str):
            key = zlib.crc32(key.encode("utf-8"))
        entropy.append(int(key) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def check_finite(x, name="array"):
    x = np.asarray(x)
    if not np.all(np.isfinite(x)):
        raise NumericalError(f"non-finite values in {name}")
    return x


def as_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=DTYPE)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
    return a


def matmul(a, b):
    """Matrix product with an explicit shape check.

    Raises :class:`ShapeError` naming both shapes when the inner dimensions
    disagree.
    """
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    if a.ndim < 1 or b.ndim < 1 or a.shape[-1] != b.shape[0]:
        raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        out = a @ b
    return check_finite(out, "matmul result")


def sigmoid(x):
    # branch on sign so exp never overflows
    x = np.asarray(x, dtype=DTYPE)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def tanh(x):
    return np.tanh(np.asarray(x, dtype=DTYPE))


def _binary(fn, a, b):
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    return check_finite(fn(a, b), "elementwise result")


_OPS = {
    "sigmoid": (1, sigmoid),
    "tanh": (1, tanh),
    "add": (2, lambda a, b: _binary(np.add, a, b)),
    "mul": (2, lambda a, b: _binary(np.multiply, a, b)),
}


def elementwise(op, *args):
    """Apply ``sigmoid``, ``tanh``, ``add`` or ``mul`` elementwise."""
    try:
        arity, fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown elementwise op {op!r}") from None
    if len(args) != arity:
        raise TypeError(f"{op} takes {arity} argument(s), got {len(args)}")
    return fn(*args)


def softmax(v, axis=-1):
    v = np.asarray(v, dtype=DTYPE)
    if v.size == 0 or v.shape[axis] == 0:
        raise ShapeError("softmax of an empty vector")
    shifted = v - np.max(v, axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=axis, keepdims=True)


def finite_diff_grad(f, params, eps=1e-5):
    """Central-difference gradient of scalar ``f`` at the flat vector ``params``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    theta = np.array(params, dtype=DTYPE).ravel()
    grad = np.zeros_like(theta)
    for i in range(theta.size):
        old = theta[i]
        theta[i] = old + eps
        fp = float(f(theta.copy()))
        theta[i] = old - eps
        fm = float(f(theta.copy()))
        theta[i] = old
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise NumericalError(f"f is not finite around coordinate {i}")
        grad[i] = (fp - fm) / (2.0 * eps)
    return grad

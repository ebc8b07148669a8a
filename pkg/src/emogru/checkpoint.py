"""Model checkpoint files.

Layout (version 1)::

    EMOGRU-CHECKPOINT 1\\n
    <one line of JSON>\\n
    <raw little-endian float64 data of every array, in header order>

The JSON header has ``config`` (the :class:`ModelConfig` fields), ``arrays`` (a
list of ``{"name", "shape"}`` records, in storage order) and ``extra`` (free
form; the CLI stores the vocabulary there). Writing is deterministic, so equal
parameters give byte-identical files.
"""

import json

import numpy as np

from .errors import DataFormatError, ShapeError
from .layers import ModelConfig, ModelParams

MAGIC = b"EMOGRU-CHECKPOINT"
VERSION = 1


def save_checkpoint(path, params, extra=None):
    header = {
        "config": params.config.to_dict(),
        "arrays": [{"name": k, "shape": list(v.shape)} for k, v in params.arrays.items()],
        "extra": extra or {},
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC + b" %d\n" % VERSION)
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        for a in params.arrays.values():
            fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def load_checkpoint(path):
    """Return ``(params, extra)``."""
    try:
        with open(path, "rb") as fh:
            first = fh.readline()
            second = fh.readline()
            payload = fh.read()
    except OSError as e:
        raise DataFormatError(f"cannot read checkpoint: {e}", path) from e
    parts = first.split()
    if len(parts) != 2 or parts[0] != MAGIC:
        raise DataFormatError("not an emogru checkpoint", path)
    if int(parts[1]) != VERSION:
        raise DataFormatError(f"unsupported checkpoint version {int(parts[1])}", path)
    try:
        header = json.loads(second)
        config = ModelConfig(**header["config"])
    except (ValueError, KeyError, TypeError) as e:
        raise DataFormatError(f"bad checkpoint header: {e}", path) from e

    arrays, offset = {}, 0
    for rec in header["arrays"]:
        shape = tuple(rec["shape"])
        nbytes = 8 * int(np.prod(shape, dtype=np.int64))
        if offset + nbytes > len(payload):
            raise DataFormatError(f"truncated data for {rec['name']}", path)
        arrays[rec["name"]] = np.frombuffer(payload[offset:offset + nbytes],
                                            dtype="<f8").reshape(shape).astype(np.float64)
        offset += nbytes
    if offset != len(payload):
        raise DataFormatError("trailing bytes after the last array", path)
    try:
        params = ModelParams(config, arrays)
    except ShapeError as e:
        raise DataFormatError(f"checkpoint arrays do not match its config: {e}", path) from e
    return params, header.get("extra", {})

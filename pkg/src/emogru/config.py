"""Run configuration: ``key = value`` files with flag overrides.

Format: one ``key = value`` per line, ``#`` starts a comment line. Booleans
accept true/false/yes/no/1/0. Input paths (data, lexicons, maps, vectors) are
resolved against the config file's directory; ``checkpoint_dir`` and other
outputs are resolved against the working directory.

Precedence, lowest first: :data:`DEFAULTS`, the config file, ``--override``
flags, ``--seed``.
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .layers import ModelConfig
from .training import TrainConfig

_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _bool(s):
    try:
        return _BOOL[str(s).strip().lower()]
    except KeyError:
        raise ValueError(f"not a boolean: {s!r}") from None


def _opt_str(s):
    s = str(s).strip()
    return s or None


# key -> (parser, default)
DEFAULTS = {
    "data_format": (str, "emocontext"),
    "train": (_opt_str, None),
    "dev": (_opt_str, None),
    "test": (_opt_str, None),
    "label_map": (_opt_str, None),
    "swn": (_opt_str, None),
    "nrc": (_opt_str, None),
    "emoticons": (_opt_str, None),
    "vectors": (_opt_str, None),
    "checkpoint_dir": (str, "runs"),
    "emb_dim": (int, 300),
    "hidden": (int, 70),
    "att_dim": (int, 70),
    "dense_width": (int, 300),
    "dense_count": (int, 3),
    "max_len": (int, 70),
    "use_aux_features": (_bool, True),
    "max_epochs": (int, 30),
    "batch_size": (int, 32),
    "lr": (float, 0.001),
    "dropout": (float, 0.2),
    "patience": (int, 2),
    "early_stopping": (_bool, True),
    "seed": (int, 0),
    "runs": (int, 5),
    "gradcheck_tolerance": (float, 1e-4),
}
INPUT_PATHS = ("train", "dev", "test", "label_map", "swn", "nrc", "emoticons", "vectors")
MODEL_KEYS = ("emb_dim", "hidden", "att_dim", "dense_width", "dense_count", "max_len",
              "use_aux_features")
TRAIN_KEYS = ("max_epochs", "batch_size", "lr", "dropout", "patience", "early_stopping",
              "seed", "runs")


def parse_lines(lines, source="<config>"):
    raw = {}
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        raw[key] = value
    return raw


def _convert(key, value):
    parser, _ = DEFAULTS[key]
    try:
        return parser(value)
    except ValueError as e:
        raise ConfigError(f"bad value for {key}: {e}") from None


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)
    base_dir: Path = field(default_factory=Path.cwd)

    @classmethod
    def load(cls, path=None, overrides=(), seed=None):
        values = {k: d for k, (_, d) in DEFAULTS.items()}
        base = Path.cwd()
        if path is not None:
            p = Path(path)
            try:
                text = p.read_text(encoding="utf-8")
            except OSError as e:
                raise ConfigError(f"cannot read config {path}: {e}") from e
            base = p.resolve().parent
            for k, v in parse_lines(text.splitlines(), str(path)).items():
                values[k] = _convert(k, v)
        for item in overrides:
            if "=" not in item:
                raise ConfigError(f"--override expects KEY=VALUE, got {item!r}")
            k, v = (s.strip() for s in item.split("=", 1))
            if k not in DEFAULTS:
                raise ConfigError(f"unknown key {k!r}")
            values[k] = _convert(k, v)
        if seed is not None:
            values["seed"] = int(seed)
        cfg = cls(values, base)
        cfg.model_config(1)
        cfg.train_config()
        if values["data_format"] not in ("emocontext", "sentences"):
            raise ConfigError("data_format must be 'emocontext' or 'sentences'")
        return cfg

    def __getitem__(self, key):
        return self.values[key]

    def path(self, key):
        """Resolved input path, or ``None`` when unset."""
        v = self.values[key]
        if v is None:
            return None
        p = Path(v)
        return p if p.is_absolute() else self.base_dir / p

    def require(self, *keys):
        for k in keys:
            p = self.path(k)
            if p is None:
                raise ConfigError(f"config key {k!r} is required for this command")
            if not p.exists():
                raise ConfigError(f"{k}: file not found: {p}")

    def model_config(self, vocab_size):
        kw = {k: self.values[k] for k in MODEL_KEYS}
        return ModelConfig(vocab_size=vocab_size, dropout_rate=self.values["dropout"], **kw)

    def train_config(self):
        return TrainConfig(**{k: self.values[k] for k in TRAIN_KEYS})


def bundled_config():
    """Path of the config that trains on the generated corpus shipped with the package."""
    return Path(str(resources.files("emogru.resources").joinpath("synthetic/synthetic.cfg")))

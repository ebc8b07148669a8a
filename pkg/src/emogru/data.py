"""Corpus loading, vocabulary, splitting, batching and pretrained vectors."""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataFormatError
from .features import (ANCHORS, TASK_LABELS, TURN_SEP, FeatureBundle, emo_features,
                       preprocess, soi_features, stack_bundles)
from .layers import init_array
from .tensor import DTYPE, make_rng

log = logging.getLogger(__name__)

PAD, UNK = "<pad>", "<unk>"
LABEL_INDEX = {label: i for i, label in enumerate(TASK_LABELS)}


@dataclass
class Example:
    id: str
    turns: list
    gold: str = None
    genre: str = ""

    def __post_init__(self):
        if not 1 <= len(self.turns) <= 3:
            raise ValueError(f"example {self.id}: expected 1-3 turns, got {len(self.turns)}")
        if not any(t.strip() for t in self.turns):
            raise ValueError(f"example {self.id}: all turns are empty")
        if self.gold is not None and self.gold not in LABEL_INDEX:
            raise ValueError(f"example {self.id}: unknown label {self.gold!r}")

    @property
    def label_index(self):
        return LABEL_INDEX[self.gold]


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except OSError as e:
        raise DataFormatError(f"cannot read file: {e}", path) from e


def load_emocontext(path, allow_unlabeled=False, genre="emocontext"):
    """Read EmoContext TSV rows: ``id, turn1, turn2, turn3[, label]``.

    A header row starting with ``id`` is skipped. Unlabeled (4-column) rows are
    only accepted with ``allow_unlabeled=True``.
    """
    examples = []
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if lineno == 1 and cols[0].strip().lower() == "id":
            continue
        if len(cols) == 5:
            gold = cols[4].strip()
            if gold not in LABEL_INDEX:
                raise DataFormatError(f"unknown label {gold!r} (expected one of "
                                      f"{', '.join(TASK_LABELS)})", path, lineno)
        elif len(cols) == 4:
            if not allow_unlabeled:
                raise DataFormatError("unlabeled row (4 columns) outside predict mode", path, lineno)
            gold = None
        else:
            raise DataFormatError(f"expected 4 or 5 tab-separated columns, got {len(cols)}",
                                  path, lineno)
        try:
            examples.append(Example(cols[0].strip(), cols[1:4], gold, genre))
        except ValueError as e:
            raise DataFormatError(str(e), path, lineno) from None
    return examples


def load_label_map(path):
    """``source_tag=target_tag`` lines, ``#`` comments."""
    mapping = {}
    for lineno, line in enumerate(_read_lines(path), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataFormatError("expected 'source=target'", path, lineno)
        src, dst = (s.strip() for s in line.split("=", 1))
        if dst not in LABEL_INDEX:
            raise DataFormatError(f"target label {dst!r} is not a task label", path, lineno)
        mapping[src] = dst
    return mapping


def load_labeled_sentences(path, label_map, genre=""):
    """Read ``sentence<TAB>label`` rows, remapping labels.

    Rows whose label is not in ``label_map`` are dropped. Returns
    ``(examples, n_dropped)``.
    """
    examples, dropped = [], 0
    stem = Path(path).stem
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise DataFormatError(f"expected 'sentence<TAB>label', got {len(cols)} columns",
                                  path, lineno)
        text, tag = cols[0], cols[1].strip()
        if tag not in label_map:
            dropped += 1
            continue
        if not text.strip():
            raise DataFormatError("empty sentence", path, lineno)
        examples.append(Example(f"{stem}-{lineno}", [text], label_map[tag], genre))
    if dropped:
        log.info("%s: dropped %d rows with unmapped labels", path, dropped)
    return examples, dropped


# ---------------------------------------------------------------- tokens / vocab

def example_tokens(example, emoticon_map=None):
    """Normalized tokens of all turns, joined by ``<turn-sep>`` anchors."""
    tokens = []
    for i, turn in enumerate(example.turns):
        if i:
            tokens.append(TURN_SEP)
        tokens.extend(t.surface for t in preprocess(turn, emoticon_map))
    return tokens


class Vocabulary:
    """Token <-> index map. ``<pad>`` is 0, ``<unk>`` is 1, anchors follow."""

    def __init__(self, tokens=()):
        self.itos = [PAD, UNK] + sorted(ANCHORS)
        self.stoi = {t: i for i, t in enumerate(self.itos)}
        for t in tokens:
            self.add(t)

    @property
    def n_reserved(self):
        return 2 + len(ANCHORS)

    def add(self, token):
        if token not in self.stoi:
            self.stoi[token] = len(self.itos)
            self.itos.append(token)
        return self.stoi[token]

    def __len__(self):
        return len(self.itos)

    def __contains__(self, token):
        return token in self.stoi

    def index(self, token):
        return self.stoi.get(token, 1)

    @classmethod
    def build(cls, examples, emoticon_map=None, min_freq=1):
        counts = Counter()
        for ex in examples:
            counts.update(example_tokens(ex, emoticon_map))
        vocab = cls()
        for tok, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            if n >= min_freq:
                vocab.add(tok)
        return vocab

    @classmethod
    def from_list(cls, itos):
        vocab = cls()
        if itos[:vocab.n_reserved] != vocab.itos:
            raise DataFormatError("vocabulary does not start with the reserved tokens")
        for t in itos[vocab.n_reserved:]:
            vocab.add(t)
        return vocab


def encode(example, vocab, max_len=70, emoticon_map=None):
    """``(token_ids, mask)`` padded/truncated to ``max_len``."""
    tokens = example if isinstance(example, list) else example_tokens(example, emoticon_map)
    ids = np.zeros(max_len, dtype=np.int64)
    mask = np.zeros(max_len, dtype=DTYPE)
    for t, tok in enumerate(tokens[:max_len]):
        ids[t] = vocab.index(tok)
        mask[t] = 1.0
    return ids, mask


def decode(token_ids, mask, vocab):
    return [vocab.itos[i] for i, m in zip(token_ids, mask) if m > 0]


def featurize(example, vocab, max_len=70, swn=None, nrc=None, emoticon_map=None):
    """Full model input for one example. Lexicons may be ``None``, in which
    case the corresponding features are all sentinel values."""
    tokens = example_tokens(example, emoticon_map)
    ids, mask = encode(tokens, vocab, max_len)
    if swn is not None:
        sent, obj = soi_features(tokens, swn, max_len)
    else:
        sent = obj = np.full(max_len, 0.001)
    emo = emo_features(tokens, nrc, max_len) if nrc is not None else np.full(8, 0.001)
    return FeatureBundle(ids, mask, sent, obj, emo)


@dataclass
class EncodedSet:
    """Stacked feature bundles plus gold label indices (``-1`` when unlabeled)."""
    features: FeatureBundle
    labels: np.ndarray
    ids: list = field(default_factory=list)

    def __len__(self):
        return len(self.labels)

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return EncodedSet(self.features[idx], self.labels[idx], [self.ids[i] for i in idx])


def encode_dataset(examples, vocab, max_len=70, swn=None, nrc=None, emoticon_map=None):
    bundles = [featurize(ex, vocab, max_len, swn, nrc, emoticon_map) for ex in examples]
    if not bundles:
        raise DataFormatError("empty dataset")
    labels = np.array([LABEL_INDEX[ex.gold] if ex.gold is not None else -1 for ex in examples],
                      dtype=np.int64)
    return EncodedSet(stack_bundles(bundles), labels, [ex.id for ex in examples])


# ---------------------------------------------------------------- splits / batches

@dataclass
class DatasetSplit:
    train: list
    dev: list
    test: list


def split(examples, ratios=(0.8, 0.1, 0.1), seed=0):
    """Seeded shuffle, then contiguous train/dev/test slices."""
    if len(ratios) != 3 or abs(sum(ratios) - 1.0) > 1e-9 or min(ratios) < 0:
        raise ConfigError(f"split ratios must be 3 nonnegative numbers summing to 1, got {ratios}")
    n = len(examples)
    order = make_rng(seed, "split").permutation(n)
    # tolerance guards against 0.29 * 100 == 28.999...
    n_train = int(math.floor(n * ratios[0] + 1e-9))
    n_dev = int(math.floor(n * ratios[1] + 1e-9))
    shuffled = [examples[i] for i in order]
    return DatasetSplit(shuffled[:n_train], shuffled[n_train:n_train + n_dev],
                        shuffled[n_train + n_dev:])


def make_batches(items, batch_size=32, seed=0, shuffle=True, epoch=0):
    """Consecutive batches; the last one may be short. Shuffling depends only
    on ``(seed, epoch)``."""
    if batch_size < 1:
        raise ConfigError("batch_size must be >= 1")
    items = list(items)
    if shuffle:
        order = make_rng(seed, "batches", epoch).permutation(len(items))
        items = [items[i] for i in order]
    return [items[i:i + batch_size] for i in range(0, len(items), batch_size)]


# ---------------------------------------------------------------- pretrained vectors

@dataclass
class EmbeddingCoverage:
    found: int
    missing: int
    file_words: int

    @property
    def ratio(self):
        total = self.found + self.missing
        return self.found / total if total else 0.0


def load_pretrained_embeddings(path, vocab, dim, seed=0):
    """Build a ``len(vocab) x dim`` matrix from a word-vector text file.

    Rows for words absent from the file keep the same seeded initialization the
    model would use. Returns ``(matrix, coverage)``.
    """
    matrix = init_array("embedding", (len(vocab), dim), seed)
    filled = np.zeros(len(vocab), dtype=bool)
    exact = np.zeros(len(vocab), dtype=bool)
    n_words = 0
    lines = _read_lines(path)
    for lineno, line in enumerate(lines, 1):
        parts = line.rstrip().split(" ")
        if not line.strip():
            continue
        if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
            if int(parts[1]) != dim:
                raise ConfigError(f"{path}: vectors have dimension {parts[1]}, model expects {dim}")
            continue
        if len(parts) - 1 != dim:
            if n_words == 0:
                raise ConfigError(f"{path}: vectors have dimension {len(parts) - 1}, "
                                  f"model expects {dim}")
            raise DataFormatError(f"expected {dim} values, got {len(parts) - 1}", path, lineno)
        n_words += 1
        word = parts[0]
        # exact match wins over a lowercased one
        for cand, is_exact in ((word, True), (word.lower(), False)):
            idx = vocab.stoi.get(cand)
            if idx is None or idx < 2 or exact[idx] or (filled[idx] and not is_exact):
                continue
            try:
                matrix[idx] = np.array(parts[1:], dtype=DTYPE)
            except ValueError:
                raise DataFormatError("non-numeric vector value", path, lineno) from None
            filled[idx] = True
            exact[idx] |= is_exact
            break
    found = int(filled[2:].sum())
    coverage = EmbeddingCoverage(found, len(vocab) - 2 - found, n_words)
    log.info("pretrained vectors: %d/%d vocabulary rows covered", found, len(vocab) - 2)
    return matrix, coverage

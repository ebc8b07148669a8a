"""Lexicon majority-vote baseline, confusion matrices and P/R/F1 metrics."""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DataFormatError
from .features import TASK_LABELS

EMOTIONS = ("happy", "sad", "angry")
OTHERS = "others"
# NRC category -> task label
NRC_TO_TASK = {"joy": "happy", "sadness": "sad", "anger": "angry"}


def restrict_to_task(nrc):
    """Keep only the NRC categories that correspond to task labels.

    Returns ``word -> frozenset of task labels``.
    """
    out = {}
    for word, cats in nrc.associations.items():
        labels = frozenset(NRC_TO_TASK[c] for c in cats if c in NRC_TO_TASK)
        if labels:
            out[word] = labels
    return out


def baseline_classify(tokens, nrc3, rng):
    """Majority vote over emotion-word hits.

    ``nrc3`` is the output of :func:`restrict_to_task`. A unique top count wins;
    ties at the top are broken uniformly with ``rng``; no hits means ``others``.
    """
    counts = dict.fromkeys(EMOTIONS, 0)
    for tok in tokens:
        word = getattr(tok, "surface", tok)
        for label in nrc3.get(word, ()):
            counts[label] += 1
    best = max(counts.values())
    if best == 0:
        return OTHERS
    tied = [label for label in EMOTIONS if counts[label] == best]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def confusion(preds, golds, labels=TASK_LABELS):
    """``counts[gold, pred]`` over ``labels``."""
    if len(preds) != len(golds):
        raise ValueError(f"{len(preds)} predictions for {len(golds)} gold labels")
    index = {label: i for i, label in enumerate(labels)}
    cm = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for p, g in zip(preds, golds):
        try:
            cm[index[g], index[p]] += 1
        except KeyError as e:
            raise ValueError(f"unknown label {e.args[0]!r}") from None
    return cm


def _prf(tp, fp, fn):
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


@dataclass
class Metrics:
    per_class: dict
    micro_precision: float
    micro_recall: float
    micro_f1: float
    overall_f1: float
    accuracy: float

    def flat(self):
        """Every metric as one ``name -> float`` mapping."""
        out = {"micro_precision": self.micro_precision, "micro_recall": self.micro_recall,
               "micro_f1": self.micro_f1, "overall_f1": self.overall_f1,
               "accuracy": self.accuracy}
        for label, vals in self.per_class.items():
            for k, v in vals.items():
                out[f"{label}_{k}"] = v
        return out

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    def table(self):
        lines = [f"{'class':<8} {'prec':>7} {'rec':>7} {'f1':>7}"]
        for label, v in self.per_class.items():
            lines.append(f"{label:<8} {v['precision']:7.4f} {v['recall']:7.4f} {v['f1']:7.4f}")
        lines.append(f"{'micro-3':<8} {self.micro_precision:7.4f} {self.micro_recall:7.4f} "
                     f"{self.micro_f1:7.4f}")
        lines.append(f"overall f1 {self.overall_f1:.4f}  accuracy {self.accuracy:.4f}")
        return "\n".join(lines)


def compute_metrics(cm, labels=TASK_LABELS, emotions=EMOTIONS):
    cm = np.asarray(cm)
    total = cm.sum()
    if cm.ndim != 2 or total == 0:
        raise ValueError("empty confusion matrix")
    tp = np.diag(cm).astype(float)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp

    per_class = {}
    for i, label in enumerate(labels):
        p, r, f = _prf(tp[i], fp[i], fn[i])
        per_class[label] = {"precision": p, "recall": r, "f1": f}

    emo = [labels.index(e) for e in emotions]
    mp, mr, mf = _prf(tp[emo].sum(), fp[emo].sum(), fn[emo].sum())
    _, _, overall = _prf(tp.sum(), fp.sum(), fn.sum())
    return Metrics(per_class, mp, mr, mf, overall, float(tp.sum() / total))


def write_predictions(path, ids, labels):
    with open(path, "w", encoding="utf-8") as fh:
        for i, label in zip(ids, labels):
            fh.write(f"{i}\t{label}\n")


def read_predictions(path):
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 2:
                raise DataFormatError("expected 'id<TAB>label'", path, lineno)
            out.append((cols[0], cols[1]))
    return out

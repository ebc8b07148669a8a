"""The lexicon majority-vote tagger next to a confusion matrix read-out.
Note how the micro score ignores the others/others cell."""

import numpy as np

from emogru.config import RunConfig, bundled_config
from emogru.data import example_tokens, load_emocontext
from emogru.evaluation import baseline_classify, compute_metrics, confusion, restrict_to_task
from emogru.features import load_emoticon_map, load_nrc
from emogru.tensor import make_rng

cfg = RunConfig.load(bundled_config())
emoticons = load_emoticon_map()
nrc3 = restrict_to_task(load_nrc(cfg.path("nrc")))
test = load_emocontext(cfg.path("test"))

rng = make_rng(0, "baseline")
preds = [baseline_classify(example_tokens(ex, emoticons), nrc3, rng) for ex in test]
cm = confusion(preds, [ex.gold for ex in test])
m = compute_metrics(cm)
print(cm)
print(m.table())

# the synthetic cues are easy; a messier matrix shows the others/others effect
cm = np.array([[5, 1, 0, 2],
               [1, 6, 1, 1],
               [0, 2, 7, 1],
               [3, 1, 1, 20]])
padded = cm.copy()
padded[3, 3] += 1000
before, after = compute_metrics(cm), compute_metrics(padded)
print("\nhand matrix, then with 1000 extra correct 'others':")
print(f"  micro-F1 {before.micro_f1:.4f} -> {after.micro_f1:.4f}")
print(f"  accuracy {before.accuracy:.4f} -> {after.accuracy:.4f}")

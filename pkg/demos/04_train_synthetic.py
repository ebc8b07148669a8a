"""Train on the bundled synthetic corpus: a few repeated runs, early
stopping on dev loss, mean and standard deviation over runs."""

import logging

from emogru.config import RunConfig, bundled_config
from emogru.data import Vocabulary, encode_dataset, load_emocontext
from emogru.features import load_emoticon_map, load_nrc, load_sentiwordnet
from emogru.training import run_experiment

logging.basicConfig(level=logging.INFO, format="%(message)s")

cfg = RunConfig.load(bundled_config(), overrides=["runs=3", "max_epochs=15"])
emoticons = load_emoticon_map()
swn, nrc = load_sentiwordnet(cfg.path("swn")), load_nrc(cfg.path("nrc"))
train, dev, test = (load_emocontext(cfg.path(k)) for k in ("train", "dev", "test"))
vocab = Vocabulary.build(train, emoticons)
sets = [encode_dataset(part, vocab, cfg["max_len"], swn, nrc, emoticons)
        for part in (train, dev, test)]

result = run_experiment(cfg.train_config(), cfg.model_config(len(vocab)), *sets)
for i, run in enumerate(result.runs):
    print(f"run {i}: stopped after {run.history.epochs} epochs ({run.history.stop_reason}), "
          f"best epoch {run.history.best_epoch}, test micro-F1 {run.metrics['micro_f1']:.3f}")
print(f"micro-F1 {result.mean['micro_f1']:.3f} +- {result.std['micro_f1']:.3f}")

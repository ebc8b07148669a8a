"""The lexicon-derived side features for one conversation: per-token
sentiment and objectivity scores, and the 8-way emotion presence vector."""

from emogru.config import RunConfig, bundled_config
from emogru.data import Example, Vocabulary, decode, featurize
from emogru.features import NRC_CATEGORIES, load_emoticon_map, load_nrc, load_sentiwordnet

# the small lexicons bundled with the synthetic corpus
cfg = RunConfig.load(bundled_config())
swn, nrc = load_sentiwordnet(cfg.path("swn")), load_nrc(cfg.path("nrc"))

emoticons = load_emoticon_map()
ex = Example("c1", ["i am sooooo glad today :)", "why?", "zxqv wonderful news but i miss you"])
vocab = Vocabulary.build([ex], emoticons)
fb = featurize(ex, vocab, 20, swn, nrc, emoticons)

print(f"{'token':>14s} {'sent':>7s} {'obj':>7s}")
n = int(fb.mask.sum())
for tok, s, o in zip(decode(fb.token_ids, fb.mask, vocab), fb.sent[:n], fb.obj[:n]):
    print(f"{tok:>14s} {s:7.3f} {o:7.3f}")
print("(0.001 marks tokens the lexicon does not know, and padding)")
print("emotion vector:")
for cat, v in zip(NRC_CATEGORIES, fb.emo):
    print(f"  {cat:<13s}{v:g}")

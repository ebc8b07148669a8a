"""Generated toy corpus and lexicons.

Nothing here comes from a real dataset. Each class has its own cue words, so a
working model separates the classes easily; this is what the smoke tests, the
bundled CLI config and the demos train on.
"""

from pathlib import Path

from .data import Example
from .features import NRC_CATEGORIES
from .tensor import make_rng

CUES = {
    "happy": ["great", "love", "awesome", "yay", "glad", "wonderful", "fun", "excited"],
    "sad": ["miss", "cry", "lonely", "sad", "hurt", "sorry", "alone", "tears"],
    "angry": ["hate", "annoying", "stupid", "furious", "mad", "angry", "idiot", "shut"],
    "others": ["table", "tomorrow", "meeting", "phone", "weather", "book", "train", "lunch"],
}
FILLER = ["i", "you", "the", "is", "so", "really", "this", "that", "it", "what", "do", "we"]
EMOTICONS = {"happy": [":)", ":D"], "sad": [":(", ":'("], "angry": [">:("], "others": []}

# invented (pos, neg) scores in SentiWordNet style
_SWN_SCORES = {"happy": (0.625, 0.0), "sad": (0.0, 0.5), "angry": (0.0, 0.75), "others": (0.0, 0.0)}
# invented NRC-style associations
_NRC_CATS = {"happy": ("joy", "trust"), "sad": ("sadness",), "angry": ("anger", "disgust"),
             "others": ()}


def make_examples(n, seed=0, turns=3, noise_words=2):
    """``n`` examples cycling through the four labels."""
    rng = make_rng(seed, "synthetic")
    labels = list(CUES)
    examples = []
    for i in range(n):
        label = labels[i % 4]
        texts = []
        for t in range(turns):
            words = list(rng.choice(FILLER, size=int(rng.integers(1, noise_words + 2))))
            # the emotional signal sits in the last turn, like a reply
            if t == turns - 1 or rng.random() < 0.3:
                words.insert(int(rng.integers(len(words) + 1)), str(rng.choice(CUES[label])))
            if t == turns - 1 and EMOTICONS[label] and rng.random() < 0.3:
                words.append(str(rng.choice(EMOTICONS[label])))
            if rng.random() < 0.1:
                words[0] = words[0].upper()
            texts.append(" ".join(words))
        examples.append(Example(f"syn{seed}-{i}", texts, label, "synthetic"))
    return examples


def swn_lines():
    lines = ["# synthetic SentiWordNet-format lexicon",
             "# POS\tID\tPosScore\tNegScore\tSynsetTerms\tGloss"]
    sid = 1
    for label, words in CUES.items():
        ps, ns = _SWN_SCORES[label]
        for w in words:
            lines.append(f"a\t{sid:08d}\t{ps}\t{ns}\t{w}#1\tgenerated entry")
            sid += 1
            # a second, weaker sense so sense averaging matters
            lines.append(f"n\t{sid:08d}\t{ps / 2}\t{ns / 2}\t{w}#2\tgenerated entry")
            sid += 1
    return lines


def nrc_lines():
    lines = []
    for label, words in CUES.items():
        for w in words:
            for cat in NRC_CATEGORIES:
                lines.append(f"{w}\t{cat}\t{int(cat in _NRC_CATS[label])}")
    return lines


def write_emocontext(path, examples, labeled=True):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id\tturn1\tturn2\tturn3" + ("\tlabel" if labeled else "") + "\n")
        for ex in examples:
            cols = [ex.id] + list(ex.turns) + ([ex.gold] if labeled else [])
            fh.write("\t".join(cols) + "\n")


def write_corpus(directory, n_train=60, n_dev=16, n_test=16, seed=0):
    """Write train/dev/test/unlabeled TSVs plus both lexicons into ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_emocontext(d / "train.tsv", make_examples(n_train, seed))
    write_emocontext(d / "dev.tsv", make_examples(n_dev, seed + 1))
    test = make_examples(n_test, seed + 2)
    write_emocontext(d / "test.tsv", test)
    write_emocontext(d / "unlabeled.tsv", test[:3], labeled=False)
    (d / "swn.txt").write_text("\n".join(swn_lines()) + "\n", encoding="utf-8")
    (d / "nrc.txt").write_text("\n".join(nrc_lines()) + "\n", encoding="utf-8")
    return d

"""Tweet-style preprocessing and the two lexicon feature families.

Preprocessing turns raw text into :class:`Token` objects. URLs, image links,
hashtags and @mentions become anchor tokens; emoticons are kept whole and
mapped onto emotion anchors by :func:`normalize`; elongated words are squeezed
and all-caps words are lowercased with a flag.

Lexicon features:

* SOI: per position, the signed polarity ``pos - neg`` and the objectivity
  ``1 - pos - neg`` averaged over every SentiWordNet sense of the token.
* emo: an 8-slot presence vector over the NRC categories.

Anything missing from a lexicon, and every padding position, gets the
``ABSENT`` sentinel 0.001 instead of 0.
"""

import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataFormatError, LexiconFormatError

ABSENT = 0.001

NRC_CATEGORIES = ("joy", "trust", "anticipation", "surprise",
                  "anger", "fear", "sadness", "disgust")
# polarity columns present in the official NRC file; not used as emotions
_NRC_IGNORED = {"positive", "negative"}

TASK_LABELS = ("happy", "sad", "angry", "others")

URL = "<url>"
IMAGE = "<image>"
HASHTAG = "<hashtag>"
USER = "<user>"
EMOTICON = "<emoticon>"
TURN_SEP = "<turn-sep>"
ANCHORS = frozenset([URL, IMAGE, HASHTAG, USER, EMOTICON, TURN_SEP]
                    + [f"<emo_{label}>" for label in TASK_LABELS])


def emotion_anchor(label):
    return f"<emo_{label}>"


@dataclass(frozen=True)
class Token:
    surface: str
    was_caps: bool = False
    was_url: bool = False
    was_image_url: bool = False
    was_hashtag: bool = False
    was_mention: bool = False
    was_emoticon: bool = False
    had_elongation: bool = False

    @property
    def is_anchor(self):
        return self.surface in ANCHORS

    def __str__(self):
        return self.surface


_IMAGE_RE = re.compile(r"(?i)(pic\.twitter\.com/\S+|\S+\.(?:jpe?g|png|gif|bmp|webp)(?:\?\S*)?$)")

_EMOTICON = r"""
    (?:
      [<>]?[:;=8xX][\-o\*']?[\)\]\(\[dDpP/\\|@3}{]+   # :) ;-) :D :( :'( :P >:(
    | [\)\]\(\[dDpP/\\|@]+[\-o\*']?[:;=8][<>]?        # (: ):
    | <3+ | </3
    | \^_*\^ | -_+- | o_O | O_o | T_T | ;_;
    )"""

_TOKEN_RE = re.compile(
    r"""
    (?P<url>(?:https?://|www\.)\S+)
  | (?P<emoticon>""" + _EMOTICON + r"""(?=\s|$|[.,!?]))
  | (?P<mention>@\w+)
  | (?P<hashtag>\#\w+)
  | (?P<word>\w+(?:['’]\w+)*)
  | (?P<punct>[^\w\s])
    """,
    re.VERBOSE | re.UNICODE,
)

_ELONGATION_RE = re.compile(r"(.)\1{2,}", re.DOTALL)


def _caps(text):
    # a "caps word" has letters and all of them are uppercase
    return any(c.isalpha() for c in text) and text.upper() == text and text.lower() != text


def tokenize(raw):
    """Split text into tokens, anchoring URLs, image links, hashtags and
    mentions and keeping emoticons whole.

    >>> [t.surface for t in tokenize("I love it!")]
    ['i', 'love', 'it', '!']
    """
    tokens = []
    for m in _TOKEN_RE.finditer(raw or ""):
        kind, text = m.lastgroup, m.group()
        if kind == "url":
            if _IMAGE_RE.search(text):
                tokens.append(Token(IMAGE, was_url=True, was_image_url=True))
            else:
                tokens.append(Token(URL, was_url=True))
        elif kind == "emoticon":
            tokens.append(Token(text, was_emoticon=True))
        elif kind == "mention":
            tokens.append(Token(USER, was_mention=True))
        elif kind == "hashtag":
            tokens.append(Token(HASHTAG, was_hashtag=True))
        else:
            tokens.append(Token(text.lower(), was_caps=_caps(text)))
    return tokens


def normalize(tokens, emoticon_map=None):
    """Squeeze elongations, map emoticons to emotion anchors and lowercase.

    Idempotent: running it twice gives the same tokens.
    """
    emoticon_map = emoticon_map or {}
    out = []
    for tok in tokens:
        if tok.is_anchor:
            out.append(tok)
            continue
        if tok.was_emoticon:
            label = emoticon_map.get(tok.surface)
            surface = emotion_anchor(label) if label else EMOTICON
            out.append(replace(tok, surface=surface))
            continue
        surface = tok.surface
        squeezed = _ELONGATION_RE.sub(r"\1\1", surface)
        caps = tok.was_caps or _caps(squeezed)
        out.append(replace(tok, surface=squeezed.lower(), was_caps=caps,
                           had_elongation=tok.had_elongation or squeezed != surface))
    return out


def preprocess(raw, emoticon_map=None):
    return normalize(tokenize(raw), emoticon_map)


def _surfaces(tokens):
    return [t.surface if isinstance(t, Token) else str(t) for t in tokens]


# ---------------------------------------------------------------- emoticon map

def load_emoticon_map(path=None):
    """Read ``emoticon<TAB>label`` lines. Without a path, the bundled default."""
    if path is None:
        text = resources.files("emogru.resources").joinpath("emoticons.tsv").read_text("utf-8")
        source = "emoticons.tsv"
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise DataFormatError(f"cannot read emoticon map: {e}", path) from e
        source = path
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise DataFormatError("expected 'emoticon<TAB>label'", source, lineno)
        label = parts[1].strip()
        if label not in TASK_LABELS:
            raise DataFormatError(f"unknown label {label!r}", source, lineno)
        mapping[parts[0].strip()] = label
    return mapping


# ---------------------------------------------------------------- SentiWordNet

class SwnLexicon:
    """SentiWordNet scores keyed by ``(lemma, pos)``.

    Each key maps to a list of ``(pos_score, neg_score)`` pairs, one per sense.
    Lookups by bare word pool the senses of every part of speech.
    """

    def __init__(self, entries=None):
        self.entries = {}
        self._by_word = {}
        for (lemma, pos), senses in (entries or {}).items():
            for s in senses:
                self.add(lemma, pos, *s)

    def add(self, lemma, pos, pos_score, neg_score):
        if not (0.0 <= pos_score <= 1.0 and 0.0 <= neg_score <= 1.0):
            raise ValueError(f"scores for {lemma!r} must lie in [0, 1]")
        if pos_score + neg_score > 1.0 + 1e-9:
            raise ValueError(f"PosScore + NegScore > 1 for {lemma!r}")
        self.entries.setdefault((lemma, pos), []).append((pos_score, neg_score))
        self._by_word.setdefault(lemma, []).append((pos_score, neg_score))

    def senses(self, word, pos=None):
        if pos is not None:
            return self.entries.get((word, pos), [])
        return self._by_word.get(word, [])

    def scores(self, word, pos=None):
        """``(sentiment, objectivity)`` averaged over senses, or ``None``."""
        senses = self.senses(word, pos)
        if not senses:
            return None
        arr = np.asarray(senses, dtype=np.float64)
        sent = float(np.mean(arr[:, 0] - arr[:, 1]))
        obj = float(np.mean(1.0 - arr[:, 0] - arr[:, 1]))
        return sent, max(obj, 0.0)

    def __contains__(self, word):
        return word in self._by_word

    def __len__(self):
        return len(self.entries)


def load_sentiwordnet(path):
    """Parse a SentiWordNet 3.0 file.

    Columns: POS, ID, PosScore, NegScore, SynsetTerms, Gloss. ``#`` lines and
    blank lines are skipped. Synset terms look like ``good#1 well#3``; multiword
    terms keep their underscores.
    """
    lex = SwnLexicon()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise LexiconFormatError(f"cannot open SentiWordNet file: {e}", path) from e
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) < 5:
                raise LexiconFormatError(f"expected at least 5 tab-separated columns, got {len(cols)}",
                                         path, lineno)
            pos_tag, _, ps, ns, terms = cols[:5]
            try:
                pos_score, neg_score = float(ps), float(ns)
            except ValueError:
                raise LexiconFormatError(f"non-numeric scores {ps!r}, {ns!r}", path, lineno) from None
            if not (0.0 <= pos_score <= 1.0 and 0.0 <= neg_score <= 1.0):
                raise LexiconFormatError("scores must lie in [0, 1]", path, lineno)
            if pos_score + neg_score > 1.0 + 1e-9:
                raise LexiconFormatError(f"PosScore + NegScore = {pos_score + neg_score} > 1",
                                         path, lineno)
            for term in terms.split():
                lemma = term.rsplit("#", 1)[0].lower()
                if lemma:
                    lex.add(lemma, pos_tag, pos_score, neg_score)
    return lex


def soi_features(tokens, swn, max_len=70):
    """Sentiment and objectivity vectors of length ``max_len``."""
    sent = np.full(max_len, ABSENT)
    obj = np.full(max_len, ABSENT)
    for t, word in enumerate(_surfaces(tokens)[:max_len]):
        scores = swn.scores(word)
        if scores is not None:
            sent[t], obj[t] = scores
    return sent, obj


# ---------------------------------------------------------------- NRC EmoLex

class NrcLexicon:
    """Word -> set of NRC emotion categories (only positive associations kept)."""

    def __init__(self, associations=None):
        self.associations = {w: frozenset(c) for w, c in (associations or {}).items()}
        for cats in self.associations.values():
            unknown = cats - set(NRC_CATEGORIES)
            if unknown:
                raise ValueError(f"unknown NRC categories {sorted(unknown)}")

    def categories(self, word):
        return self.associations.get(word, frozenset())

    def bits(self, word):
        cats = self.categories(word)
        return tuple(int(c in cats) for c in NRC_CATEGORIES)

    def __contains__(self, word):
        return word in self.associations

    def __len__(self):
        return len(self.associations)


def load_nrc(path):
    """Parse the NRC word-level file: ``word<TAB>emotion<TAB>0|1`` per line."""
    assoc = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise LexiconFormatError(f"cannot open NRC file: {e}", path) from e
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) != 3:
                raise LexiconFormatError(f"expected 3 tab-separated columns, got {len(cols)}",
                                         path, lineno)
            word, emotion, flag = cols[0].strip().lower(), cols[1].strip().lower(), cols[2].strip()
            if flag not in ("0", "1"):
                raise LexiconFormatError(f"association must be 0 or 1, got {flag!r}", path, lineno)
            if emotion in _NRC_IGNORED:
                continue
            if emotion not in NRC_CATEGORIES:
                raise LexiconFormatError(f"unknown emotion {emotion!r}", path, lineno)
            cats = assoc.setdefault(word, set())
            if flag == "1":
                cats.add(emotion)
    return NrcLexicon({w: c for w, c in assoc.items() if c})


def emo_features(tokens, nrc, max_len=None):
    words = _surfaces(tokens)
    if max_len is not None:
        words = words[:max_len]
    present = set()
    for w in words:
        present |= nrc.categories(w)
    return np.array([1.0 if c in present else ABSENT for c in NRC_CATEGORIES])


# ---------------------------------------------------------------- bundle

@dataclass
class FeatureBundle:
    """Model input for one example (or a stack of them along axis 0)."""
    token_ids: np.ndarray
    mask: np.ndarray
    sent: np.ndarray
    obj: np.ndarray
    emo: np.ndarray

    def __len__(self):
        return 1 if np.ndim(self.token_ids) == 1 else len(self.token_ids)

    def __getitem__(self, idx):
        return FeatureBundle(self.token_ids[idx], self.mask[idx], self.sent[idx],
                             self.obj[idx], self.emo[idx])


def stack_bundles(bundles):
    return FeatureBundle(*(np.stack([getattr(b, f) for b in bundles])
                           for f in ("token_ids", "mask", "sent", "obj", "emo")))

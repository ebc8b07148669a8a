import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emogru.errors import DataFormatError, LexiconFormatError
from emogru.features import (ABSENT, EMOTICON, HASHTAG, IMAGE, NRC_CATEGORIES, URL, USER,
                             NrcLexicon, SwnLexicon, Token, emo_features, load_emoticon_map,
                             load_nrc, load_sentiwordnet, normalize, preprocess, soi_features,
                             tokenize)

SWN_TEXT = """\
# SentiWordNet-style sample
# POS\tID\tPosScore\tNegScore\tSynsetTerms\tGloss
a\t01123148\t0.75\t0\tgood#1\thaving desirable qualities
a\t01166413\t0.5\t0.125\tgood#3 full#6\tsample
n\t05142180\t0.625\t0\tgood#2 goodness#1\tsample
a\t02000001\t0\t0.875\tbad#1\tsample
v\t02000002\t0.125\t0.25\tdislike#1\tsample
a\t02000003\t0\t0\tblue#1 blue_sky#1\tsample

"""

NRC_TEXT = """\
abandon\tanger\t0
abandon\tfear\t1
abandon\tnegative\t1
abandon\tsadness\t1
happy\tjoy\t1
happy\ttrust\t1
happy\tanger\t0
glee\tjoy\t1
table\tjoy\t0
"""


@pytest.fixture
def swn_path(tmp_path):
    p = tmp_path / "swn.txt"
    p.write_text(SWN_TEXT)
    return p


@pytest.fixture
def nrc_path(tmp_path):
    p = tmp_path / "nrc.txt"
    p.write_text(NRC_TEXT)
    return p


def surfaces(tokens):
    return [t.surface for t in tokens]


# ---------------------------------------------------------------- tokenize

def test_tokenize_basic():
    toks = tokenize("I love it!")
    assert surfaces(toks) == ["i", "love", "it", "!"]
    assert toks[0].was_caps and not toks[1].was_caps


def test_tokenize_anchors():
    toks = tokenize("see http://x.co :)")
    assert surfaces(toks) == ["see", URL, ":)"]
    assert toks[1].was_url and toks[2].was_emoticon
    toks = tokenize("@bob look #blessed pic.twitter.com/abc https://t.co/a.jpg")
    assert surfaces(toks) == [USER, "look", HASHTAG, "pic", ".", "twitter", ".", "com", "/",
                              "abc", IMAGE]
    assert surfaces(tokenize("www.site.org/cat.png")) == [IMAGE]


def test_tokenize_empty():
    assert tokenize("") == []
    assert tokenize("   ") == []


def test_tokenize_keeps_emoticons_and_times():
    assert surfaces(tokenize("so sad :'( >:( ok")) == ["so", "sad", ":'(", ">:(", "ok"]
    assert surfaces(tokenize("at 10:30 ok")) == ["at", "10", ":", "30", "ok"]
    assert surfaces(tokenize("don't")) == ["don't"]


# ---------------------------------------------------------------- normalize

def test_normalize_elongation():
    (tok,) = normalize(tokenize("soooo"))
    assert tok.surface == "soo" and tok.had_elongation


def test_normalize_caps():
    (tok,) = normalize([Token("HAPPY")])
    assert tok.surface == "happy" and tok.was_caps


def test_normalize_emoticon_map():
    toks = normalize(tokenize(":) :/"), {":)": "happy"})
    assert surfaces(toks) == ["<emo_happy>", EMOTICON]


def test_default_emoticon_map():
    emap = load_emoticon_map()
    assert emap[":)"] == "happy" and emap[":("] == "sad" and emap[">:("] == "angry"
    assert surfaces(preprocess("yay :D but :( and >:(", emap)) == [
        "yay", "<emo_happy>", "but", "<emo_sad>", "and", "<emo_angry>"]


def test_emoticon_map_errors(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text(":)\thappy\n:(\tfear\n")
    with pytest.raises(DataFormatError, match=":2"):
        load_emoticon_map(p)


text_strategy = st.lists(st.sampled_from(list("aAbBoOzZ!?:;()'@#/ \tDp3<>._-") +
                                        ["http://a.b ", "HEYYY", "www.x.com", " :) "]),
                        max_size=40).map("".join)


@given(text_strategy)
def test_normalize_idempotent(text):
    emap = load_emoticon_map()
    once = normalize(tokenize(text), emap)
    assert normalize(once, emap) == once


@given(text_strategy)
def test_surfaces_lowercase_or_anchor(text):
    for tok in preprocess(text, load_emoticon_map()):
        assert tok.is_anchor or tok.surface == tok.surface.lower()


# ---------------------------------------------------------------- SentiWordNet

def test_load_sentiwordnet(swn_path):
    lex = load_sentiwordnet(swn_path)
    assert lex.senses("good", "a") == [(0.75, 0.0), (0.5, 0.125)]
    assert len(lex.senses("good")) == 3
    assert "blue_sky" in lex and "goodness" in lex


def scan_sense_mean(text, word):
    """Independent pass over SentiWordNet-format text."""
    pol, obj = [], []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        for term in cols[4].split(" "):
            if term.split("#")[0] == word:
                p, n = float(cols[2]), float(cols[3])
                pol.append(p - n)
                obj.append(1 - p - n)
    return sum(pol) / len(pol), sum(obj) / len(obj)


def test_soi_sense_mean_matches_scan(swn_path):
    lex = load_sentiwordnet(swn_path)
    sent, obj = soi_features(["good", "bad", "zzz"], lex, max_len=5)
    for i, word in enumerate(["good", "bad"]):
        s_ref, o_ref = scan_sense_mean(SWN_TEXT, word)
        assert sent[i] == pytest.approx(s_ref, abs=1e-15)
        assert obj[i] == pytest.approx(o_ref, abs=1e-15)
    assert sent[2] == obj[2] == ABSENT
    np.testing.assert_array_equal(sent[3:], ABSENT)


def test_soi_empty_and_truncation(swn_path):
    lex = load_sentiwordnet(swn_path)
    sent, obj = soi_features([], lex, 70)
    assert sent.shape == obj.shape == (70,)
    assert np.all(sent == ABSENT) and np.all(obj == ABSENT)
    long = ["zzz"] * 3 + ["good"]
    s3, _ = soi_features(long, lex, 3)
    np.testing.assert_array_equal(s3, [ABSENT] * 3)


def test_soi_ranges(swn_path):
    lex = load_sentiwordnet(swn_path)
    sent, obj = soi_features(["good", "bad", "dislike", "blue", "x"], lex, 8)
    assert np.all((sent >= -1) & (sent <= 1))
    assert np.all(((obj >= 0) & (obj <= 1)) | (obj == ABSENT))


def test_sentiwordnet_rejects_bad_scores(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("# header\na\t1\t0.75\t0.5\tgood#1\tgloss\n")
    with pytest.raises(LexiconFormatError, match=r"bad.txt:2"):
        load_sentiwordnet(p)
    p.write_text("a\t1\tx\t0.5\tgood#1\tgloss\n")
    with pytest.raises(LexiconFormatError, match=":1"):
        load_sentiwordnet(p)
    p.write_text("a\t1\t0.5\n")
    with pytest.raises(LexiconFormatError):
        load_sentiwordnet(p)
    with pytest.raises(LexiconFormatError):
        load_sentiwordnet(tmp_path / "missing.txt")
    with pytest.raises(ValueError):
        SwnLexicon({("x", "a"): [(0.7, 0.7)]})


# ---------------------------------------------------------------- NRC

def test_load_nrc(nrc_path):
    nrc = load_nrc(nrc_path)
    assert nrc.categories("abandon") == {"fear", "sadness"}
    assert nrc.categories("happy") == {"joy", "trust"}
    assert "table" not in nrc
    assert nrc.bits("glee") == (1, 0, 0, 0, 0, 0, 0, 0)


def test_load_nrc_errors(tmp_path):
    p = tmp_path / "nrc.txt"
    p.write_text("a\tjoy\t1\nb\tjoy\t2\n")
    with pytest.raises(LexiconFormatError, match=":2"):
        load_nrc(p)
    p.write_text("a\tjoy\n")
    with pytest.raises(LexiconFormatError, match=":1"):
        load_nrc(p)
    p.write_text("a\tlove\t1\n")
    with pytest.raises(LexiconFormatError):
        load_nrc(p)


def test_emo_features(nrc_path):
    nrc = load_nrc(nrc_path)
    np.testing.assert_array_equal(emo_features(["the", "table"], nrc), [ABSENT] * 8)
    joy_only = emo_features(["glee"], nrc)
    assert joy_only[NRC_CATEGORIES.index("joy")] == 1.0
    assert np.sum(joy_only == 1.0) == 1 and np.sum(joy_only == ABSENT) == 7
    np.testing.assert_array_equal(emo_features(["glee", "glee", "glee"], nrc), joy_only)
    mixed = emo_features(["abandon", "x", "happy"], nrc)
    assert [c for c, v in zip(NRC_CATEGORIES, mixed) if v == 1.0] == [
        "joy", "trust", "fear", "sadness"]
    assert emo_features(["x", "glee"], nrc, max_len=1).tolist() == [ABSENT] * 8


@given(st.lists(st.sampled_from(["abandon", "happy", "glee", "table", "x", "y"]), max_size=12),
       st.randoms())
def test_emo_order_and_duplication_invariant(words, rnd):
    nrc = NrcLexicon({"abandon": {"fear", "sadness"}, "happy": {"joy", "trust"}, "glee": {"joy"}})
    base = emo_features(words, nrc)
    shuffled = list(words)
    rnd.shuffle(shuffled)
    np.testing.assert_array_equal(emo_features(shuffled, nrc), base)
    np.testing.assert_array_equal(emo_features(words + words, nrc), base)
    assert set(base.tolist()) <= {ABSENT, 1.0}

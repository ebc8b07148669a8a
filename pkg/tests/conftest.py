import numpy as np
import pytest

from emogru.data import Vocabulary, encode_dataset
from emogru.features import load_emoticon_map, load_nrc, load_sentiwordnet
from emogru.synthetic import make_examples, write_corpus


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    return write_corpus(tmp_path_factory.mktemp("synthetic"))


@pytest.fixture(scope="session")
def lexicons(corpus_dir):
    return load_sentiwordnet(corpus_dir / "swn.txt"), load_nrc(corpus_dir / "nrc.txt")


@pytest.fixture(scope="session")
def emoticons():
    return load_emoticon_map()


@pytest.fixture(scope="session")
def synthetic_sets(lexicons, emoticons):
    """Encoded 60/16 train/dev sets with max_len 24."""
    swn, nrc = lexicons
    train_ex, dev_ex = make_examples(60, seed=0), make_examples(16, seed=1)
    vocab = Vocabulary.build(train_ex, emoticons)
    enc = lambda ex: encode_dataset(ex, vocab, 24, swn, nrc, emoticons)  # noqa: E731
    return vocab, enc(train_ex), enc(dev_ex)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

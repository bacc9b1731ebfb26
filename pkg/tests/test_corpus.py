"""The bundled mini-corpus agrees with hand-written semantics and labels."""

import itertools
import json

import pytest

from sepinv.frontend import parse_system

from conftest import CORPUS_DIR
from oracles import CORPUS, bounded_reachability


@pytest.fixture(scope="module")
def labels():
    return json.loads((CORPUS_DIR / "labels.json").read_text())


def test_every_file_is_labeled(corpus_dir, labels):
    files = {p.name for p in corpus_dir.glob("*.ts")}
    assert files == set(labels) == set(CORPUS)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_label_matches_bounded_search(name, labels):
    found = bounded_reachability(CORPUS[name], 12)
    assert (labels[name] == "UNSAFE") == (found is not None)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_parsed_file_matches_hand_semantics(corpus_dir, name):
    prog = CORPUS[name]
    sys_ = parse_system((corpus_dir / name).read_text())
    assert sys_.n == prog["n"]
    B = 4
    box = list(itertools.product(range(-B, B + 1), repeat=prog["n"]))
    for s in box:
        assert sys_.is_init(s) == prog["init"](s), s
        assert sys_.is_good(s) == prog["good"](s), s
        succ = set(prog["succ"](s))
        for t in box:
            assert sys_.step(s, t) == (t in succ), (s, t)

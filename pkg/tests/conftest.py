import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import treebank  # noqa: E402
from igpipe.lexicon import load_lexicon  # noqa: E402

REPO = Path(__file__).resolve().parents[1]
DATA = REPO / "data"
GOLDEN = Path(__file__).resolve().parent / "golden" / "minicorpus"


@pytest.fixture
def fig1():
    return treebank.state_party_submit()


@pytest.fixture
def fig2():
    return treebank.international_cooperation()


@pytest.fixture
def fig3():
    return treebank.employee_unable()


@pytest.fixture
def bundled_lexicon():
    return load_lexicon(DATA / "lexicon.csv")


@pytest.fixture
def mini_conllu_path():
    return DATA / "minicorpus" / "convention_mini.conllu"


@pytest.fixture
def train_csv_path():
    return DATA / "train.csv"

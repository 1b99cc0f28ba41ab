from pathlib import Path

import pytest

from bloomsim import chunker, verbsets, wordnet

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def mini_store():
    """Handcrafted 12-synset taxonomy; depths and scores known by hand."""
    return wordnet.load_database(FIXTURES / "mini_wordnet")


@pytest.fixture(scope="session")
def full_store():
    return wordnet.load_database(wordnet.bundled_database_path())


@pytest.fixture(scope="session")
def bundled_registry():
    consensus = verbsets.load_consensus(verbsets.bundled_consensus_path())
    return verbsets.registry_from(consensus)


@pytest.fixture(scope="session")
def bundled_grammar():
    return chunker.parse_grammar(chunker.bundled_grammar_path())


def read_annotations(path):
    """Parse the question<TAB>verb<TAB>hint fixture rows."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        question, verb, hint = line.split("\t")
        rows.append((question, verb, None if hint == "-" else hint))
    return rows

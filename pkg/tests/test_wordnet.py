"""Store loading, depth bookkeeping, and Morphy against the mini fixture.

Every expected number here was computed by hand from the 12-synset
fixture taxonomy before the store code existed.
"""

import pytest

from bloomsim.wordnet import (
    VERB,
    VIRTUAL_ROOT,
    DanglingPointerError,
    MalformedLineError,
    MissingFileError,
    PosMismatchError,
    SynsetId,
    UnknownSynsetError,
    WordNetError,
    load_database,
    normalize_lemma,
)

# Fixture topology: tree one is alpha(100) > beta(200) > {gamma(300) >
# mu(1200), delta(400)}, alpha > kappa(1000); tree two is epsilon(500) >
# zeta(600) > eta(700) > theta(800), zeta > lambda(1100); iota(900) has
# parents beta and theta.
V = lambda off: SynsetId(off, VERB)

EXPECTED_DEPTHS = {
    100: 2, 200: 3, 300: 4, 400: 4, 500: 2, 600: 3,
    700: 4, 800: 5, 900: 4, 1000: 3, 1100: 4, 1200: 5,
}


def test_loads_all_twelve_synsets(mini_store):
    assert len(mini_store) == 12
    assert set(mini_store.all_ids(VERB)) == {V(off) for off in EXPECTED_DEPTHS}


def test_version_scanned_from_header(mini_store):
    assert mini_store.version == "0.1"


def test_depths_follow_min_path_convention(mini_store):
    for offset, depth in EXPECTED_DEPTHS.items():
        assert mini_store.depth(V(offset)) == depth, offset


def test_multi_parent_node_takes_shorter_path(mini_store):
    # iota's parents sit at depths 3 (beta) and 5 (theta)
    assert mini_store.depth(V(900)) == 4


def test_ancestor_chain_with_depths(mini_store):
    assert mini_store.hypernym_ancestors(V(300)) == {
        (V(300), 4),
        (V(200), 3),
        (V(100), 2),
        (VIRTUAL_ROOT, 1),
    }


def test_ancestors_include_deep_parent(mini_store):
    ancestors = mini_store.hypernym_ancestors(V(900))
    assert (V(800), 5) in ancestors
    assert (V(200), 3) in ancestors
    assert (VIRTUAL_ROOT, 1) in ancestors


def test_lcs_of_siblings_is_parent(mini_store):
    assert mini_store.least_common_subsumer(V(300), V(400)) == (V(200), 3)


def test_lcs_identity(mini_store):
    assert mini_store.least_common_subsumer(V(300), V(300)) == (V(300), 4)


def test_lcs_across_disjoint_trees_is_virtual_root(mini_store):
    assert mini_store.least_common_subsumer(V(1000), V(800)) == (VIRTUAL_ROOT, 1)


def test_lcs_never_deeper_than_either_argument(mini_store):
    # theta is iota's parent yet deeper than iota; the next ancestor up
    # that fits under both depths must win instead.
    assert mini_store.least_common_subsumer(V(900), V(800)) == (V(700), 4)
    ids = mini_store.all_ids(VERB)
    for a in ids:
        for b in ids:
            _, depth = mini_store.least_common_subsumer(a, b)
            assert depth <= min(mini_store.depth(a), mini_store.depth(b))


def test_lcs_symmetric(mini_store):
    ids = mini_store.all_ids(VERB)
    for a in ids:
        for b in ids:
            assert mini_store.least_common_subsumer(
                a, b
            ) == mini_store.least_common_subsumer(b, a)


def test_lcs_pos_mismatch(mini_store):
    with pytest.raises(PosMismatchError):
        mini_store.least_common_subsumer(V(100), SynsetId(100, "n"))


def test_synsets_of_preserves_index_order(mini_store):
    assert mini_store.synsets_of("gamma", VERB) == (V(300), V(1100))


def test_synsets_of_normalizes_case_and_spaces(mini_store):
    assert mini_store.synsets_of("GAMMA", VERB) == (V(300), V(1100))
    assert mini_store.synsets_of("gamma up", VERB) == (V(300),)


def test_synsets_of_unknown_is_empty(mini_store):
    assert mini_store.synsets_of("xqzzy", VERB) == ()
    assert mini_store.synsets_of("", VERB) == ()


def test_unknown_synset_queries_raise(mini_store):
    with pytest.raises(UnknownSynsetError):
        mini_store.depth(V(999_999))
    with pytest.raises(UnknownSynsetError):
        mini_store.hypernym_ancestors(V(999_999))
    with pytest.raises(UnknownSynsetError):
        mini_store.synset(V(999_999))


def test_lemmatize_original_form_first(mini_store):
    assert mini_store.lemmatize("alpha", VERB) == ("alpha",)


@pytest.mark.parametrize(
    "form, expected",
    [
        ("alphas", ("alpha",)),     # s -> ""
        ("betaing", ("beta",)),     # ing -> ""
        ("gammaed", ("gamma",)),    # ed -> ""
        ("deltaes", ("delta",)),    # es -> ""
    ],
)
def test_lemmatize_suffix_rules(mini_store, form, expected):
    assert mini_store.lemmatize(form, VERB) == expected


def test_lemmatize_exception_file(mini_store):
    assert mini_store.lemmatize("blorped", VERB) == ("alpha",)
    assert mini_store.lemmatize("snarfing", VERB) == ("beta", "gamma")


def test_lemmatize_unknown_is_empty(mini_store):
    assert mini_store.lemmatize("qqqq", VERB) == ()


def test_lemmatize_outputs_are_indexed(mini_store):
    for form in ("alphas", "blorped", "snarfing", "gamma", "deltaes"):
        for base in mini_store.lemmatize(form, VERB):
            assert mini_store.synsets_of(base, VERB)


def test_lemma_index_consistent_with_synsets(mini_store):
    for lemma in mini_store.all_lemmas(VERB):
        for sid in mini_store.synsets_of(lemma, VERB):
            assert lemma in mini_store.synset(sid).lemmas


def test_reload_is_deterministic(mini_store, tmp_path):
    from tests.conftest import FIXTURES

    again = load_database(FIXTURES / "mini_wordnet")
    assert set(again.all_ids()) == set(mini_store.all_ids())
    for sid in mini_store.all_ids():
        assert again.synset(sid) == mini_store.synset(sid)
        assert again.depth(sid) == mini_store.depth(sid)


def test_normalize_lemma():
    assert normalize_lemma("Roll Up") == "roll_up"
    assert normalize_lemma("  fact   check ") == "fact_check"


# --- malformed database handling, via throwaway directories ---------------

GOOD_DATA = "00000001 29 v 01 foo 0 000 | gloss"
GOOD_INDEX = "foo v 1 0 1 0 00000001"


def _write_db(tmp_path, data=GOOD_DATA, index=GOOD_INDEX, exc=""):
    (tmp_path / "data.verb").write_text(data + "\n", encoding="utf-8")
    (tmp_path / "index.verb").write_text(index + "\n", encoding="utf-8")
    (tmp_path / "verb.exc").write_text(exc, encoding="utf-8")
    return tmp_path


def test_missing_files(tmp_path):
    with pytest.raises(MissingFileError):
        load_database(tmp_path)


def test_minimal_valid_database(tmp_path):
    store = load_database(_write_db(tmp_path))
    assert len(store) == 1
    assert store.synsets_of("foo", VERB) == (SynsetId(1, VERB),)


def test_malformed_data_line_reports_location(tmp_path):
    _write_db(tmp_path, data="00000001 29 v zz foo")
    with pytest.raises(MalformedLineError) as info:
        load_database(tmp_path)
    assert "data.verb" in str(info.value)


def test_data_line_without_words_rejected(tmp_path):
    _write_db(tmp_path, data="00000001 29 v 00 000 | gloss")
    with pytest.raises(MalformedLineError):
        load_database(tmp_path)


def test_self_hypernym_rejected(tmp_path):
    _write_db(tmp_path, data="00000001 29 v 01 foo 0 001 @ 00000001 v 0000 | g")
    with pytest.raises(MalformedLineError):
        load_database(tmp_path)


def test_index_offset_count_mismatch(tmp_path):
    _write_db(tmp_path, index="foo v 2 0 1 0 00000001")
    with pytest.raises(MalformedLineError):
        load_database(tmp_path)


def test_dangling_hypernym_pointer(tmp_path):
    _write_db(
        tmp_path,
        data="00000001 29 v 01 foo 0 001 @ 00000099 v 0000 | g",
    )
    with pytest.raises(DanglingPointerError):
        load_database(tmp_path)


def test_dangling_index_offset(tmp_path):
    _write_db(tmp_path, index="foo v 1 0 1 0 00000099")
    with pytest.raises(DanglingPointerError):
        load_database(tmp_path)


def test_index_lemma_not_listed_by_synset(tmp_path):
    _write_db(tmp_path, index="bar v 1 0 1 0 00000001")
    with pytest.raises(DanglingPointerError):
        load_database(tmp_path)


def test_hypernym_cycle_detected(tmp_path):
    data = (
        "00000001 29 v 01 foo 0 001 @ 00000002 v 0000 | g\n"
        "00000002 29 v 01 bar 0 001 @ 00000001 v 0000 | g"
    )
    index = "foo v 1 0 1 0 00000001\nbar v 1 0 1 0 00000002"
    _write_db(tmp_path, data=data, index=index)
    with pytest.raises(WordNetError, match="cycle"):
        load_database(tmp_path)


def test_malformed_exception_line(tmp_path):
    _write_db(tmp_path, exc="onlyoneword\n")
    with pytest.raises(MalformedLineError):
        load_database(tmp_path)


def test_synset_id_validation():
    with pytest.raises(ValueError):
        SynsetId(-1, VERB)
    with pytest.raises(ValueError):
        SynsetId(1, "x")

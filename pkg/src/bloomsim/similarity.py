"""Wu-Palmer similarity over the verb taxonomy.

Synset-level similarity is ``2 * depth(lcs) / (depth(a) + depth(b))``
with depths counted in nodes from the virtual root, so two top-level
verbs in unrelated trees still score ``2 * 1 / (2 + 2) = 0.5`` rather
than zero. Word-level similarity maximizes over every sense pair
reachable from the two words' base forms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .wordnet import VERB, LexicalStore, SynsetId, WordNetError


class UnknownVerbError(WordNetError):
    """A word has no verb sense, even after lemmatization."""

    def __init__(self, word):
        super().__init__(f"no verb sense found for {word!r}")
        self.word = word


@dataclass(frozen=True)
class WordSimilarity:
    """Outcome of comparing two words: the winning sense pair and score."""

    word_a: str
    word_b: str
    score: float
    synset_a: SynsetId
    synset_b: SynsetId

    def __post_init__(self):
        if not 0.0 < self.score <= 1.0:
            raise ValueError(f"score out of range: {self.score}")


def wup_synsets(store: LexicalStore, a: SynsetId, b: SynsetId) -> float:
    """Wu-Palmer similarity of two same-pos synsets, in ``(0, 1]``."""
    _, lcs_depth = store.least_common_subsumer(a, b)
    return (2.0 * lcs_depth) / (store.depth(a) + store.depth(b))


def verb_senses(store: LexicalStore, word: str) -> tuple[SynsetId, ...]:
    """Verb synsets of every base form of ``word``, index order, deduped.

    Raises :class:`UnknownVerbError` when nothing is found.
    """
    senses: list[SynsetId] = []
    for base in store.lemmatize(word, VERB):
        for sid in store.synsets_of(base, VERB):
            if sid not in senses:
                senses.append(sid)
    if not senses:
        raise UnknownVerbError(word)
    return tuple(senses)


def wup_word(store: LexicalStore, word_a: str, word_b: str) -> WordSimilarity:
    """Best Wu-Palmer score over all sense pairs of two words.

    Equal scores break toward the pair with the lowest byte offsets,
    query side first, so results do not depend on iteration order.
    """
    best = None
    best_key = None
    for sense_a in verb_senses(store, word_a):
        for sense_b in verb_senses(store, word_b):
            score = wup_synsets(store, sense_a, sense_b)
            key = (-score, sense_a.byte_offset, sense_b.byte_offset)
            if best_key is None or key < best_key:
                best_key = key
                best = (score, sense_a, sense_b)
    score, sense_a, sense_b = best
    return WordSimilarity(word_a, word_b, score, sense_a, sense_b)

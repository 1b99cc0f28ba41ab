"""Verb-to-level classification over a taxonomy registry.

A query verb is compared against every verb list in the domain. Each
level gets the full vector of word similarities, its maximum, and its
area (the plain sum of the vector). The level with the highest maximum
wins; when several levels share the top maximum, the largest area over
all levels decides; equal areas fall back to the lowest level, flagged.

Registry verbs missing from the lexicon are skipped and reported, never
scored as zero, because zeros would drag down the area of richer lists.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chunker import ChunkResult, extract_action_verb
from .similarity import WordSimilarity, verb_senses, wup_synsets
from .verbsets import TaxonomyRegistry, UnknownLevelError
from .wordnet import VERB, LexicalStore

# Wu-Palmer scores over one taxonomy are small rationals; exactly equal
# maxima are common and intended. The epsilon only absorbs float noise
# from summing.
TIE_EPSILON = 1e-9

UNIQUE_MAX = "unique-max"
AREA_TIEBREAK = "area-tiebreak"
AREA_TIE_LOWEST_LEVEL = "area-tie-lowest-level"


@dataclass(frozen=True)
class LevelScore:
    """Similarity vector of one level against the query verb."""

    level: str
    pair_scores: tuple[WordSimilarity, ...]
    max_sim: float
    area: float
    skipped: frozenset[str]

    def __post_init__(self):
        if self.max_sim != max((p.score for p in self.pair_scores), default=0.0):
            raise ValueError("max_sim must equal the maximum pair score")
        if self.area != sum(p.score for p in self.pair_scores):
            raise ValueError("area must equal the sum of pair scores")

    @property
    def mean_score(self) -> float:
        """Length-normalized diagnostic; plays no part in classification."""
        if not self.pair_scores:
            return 0.0
        return self.area / len(self.pair_scores)


@dataclass(frozen=True)
class ClassificationReport:
    query_verb: str
    domain: str
    level_scores: tuple[LevelScore, ...]
    chosen_level: str
    decision_path: str
    tied_levels: frozenset[str]
    skipped_verbs: frozenset[str]

    def __post_init__(self):
        paths = (UNIQUE_MAX, AREA_TIEBREAK, AREA_TIE_LOWEST_LEVEL)
        if self.decision_path not in paths:
            raise ValueError(f"unknown decision path {self.decision_path!r}")
        if self.chosen_level not in {s.level for s in self.level_scores}:
            raise ValueError(f"chosen level {self.chosen_level!r} not scored")
        if bool(self.tied_levels) == (self.decision_path == UNIQUE_MAX):
            raise ValueError("tied_levels must be empty exactly on unique-max")

    def score_for(self, level: str) -> LevelScore:
        for score in self.level_scores:
            if score.level == level:
                return score
        raise UnknownLevelError(f"no score for level {level!r}")


def level_similarities(
    store: LexicalStore,
    registry: TaxonomyRegistry,
    vq: str,
    domain: str,
    level: str,
) -> LevelScore:
    """Score ``vq`` against every lexicon-resolvable verb of one level."""
    query_senses = verb_senses(store, vq)
    return _score_level(store, registry, vq, query_senses, domain, level)


def _score_level(store, registry, vq, query_senses, domain, level):
    pairs = []
    skipped = []
    for list_verb in registry.verbs(domain, level):
        best = None
        best_key = None
        for sense_b in _senses_or_none(store, list_verb):
            for sense_a in query_senses:
                score = wup_synsets(store, sense_a, sense_b)
                key = (-score, sense_a.byte_offset, sense_b.byte_offset)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (score, sense_a, sense_b)
        if best is None:
            skipped.append(list_verb)
            continue
        score, sense_a, sense_b = best
        pairs.append(WordSimilarity(vq, list_verb, score, sense_a, sense_b))
    max_sim = max((p.score for p in pairs), default=0.0)
    area = sum(p.score for p in pairs)
    return LevelScore(level, tuple(pairs), max_sim, area, frozenset(skipped))


def _senses_or_none(store, word):
    senses = []
    for base in store.lemmatize(word, VERB):
        for sid in store.synsets_of(base, VERB):
            if sid not in senses:
                senses.append(sid)
    return senses


def classify_verb(
    store: LexicalStore,
    registry: TaxonomyRegistry,
    vq: str,
    domain: str,
) -> ClassificationReport:
    """Assign ``vq`` to exactly one level of ``domain``.

    Selection: highest per-level maximum similarity; on a tie, highest
    area recomputed over every level of the domain (not only the tied
    ones); on an area tie as well, the lowest-index area-tied level.
    """
    query_senses = verb_senses(store, vq)
    scores = tuple(
        _score_level(store, registry, vq, query_senses, domain, level)
        for level in registry.levels(domain)
    )

    best_max = max(s.max_sim for s in scores)
    tied = [s for s in scores if best_max - s.max_sim <= TIE_EPSILON]
    if len(tied) == 1:
        chosen = tied[0].level
        path = UNIQUE_MAX
        tied_levels = frozenset()
    else:
        tied_levels = frozenset(s.level for s in tied)
        best_area = max(s.area for s in scores)
        area_tied = [s for s in scores if best_area - s.area <= TIE_EPSILON]
        chosen = area_tied[0].level  # scores follow domain level order
        path = AREA_TIEBREAK if len(area_tied) == 1 else AREA_TIE_LOWEST_LEVEL

    skipped = frozenset(v for s in scores for v in s.skipped)
    return ClassificationReport(
        vq, domain, scores, chosen, path, tied_levels, skipped
    )


def classify_question(
    store: LexicalStore,
    registry: TaxonomyRegistry,
    grammar,
    question: str,
    domain: str,
) -> tuple[ChunkResult, ClassificationReport]:
    """Extract the question's action verb, then classify it."""
    chunk = extract_action_verb(store, grammar, question)
    report = classify_verb(store, registry, chunk.action_verb, domain)
    return chunk, report


def report_to_dict(store: LexicalStore, report: ClassificationReport) -> dict:
    """JSON-ready rendering of a report, including the lexicon version."""
    return {
        "query_verb": report.query_verb,
        "domain": report.domain,
        "lexicon_version": store.version,
        "chosen_level": report.chosen_level,
        "decision_path": report.decision_path,
        "tied_levels": sorted(report.tied_levels),
        "skipped_verbs": sorted(report.skipped_verbs),
        "levels": [
            {
                "level": s.level,
                "max_sim": s.max_sim,
                "area": s.area,
                "pairs": [
                    {
                        "verb": p.word_b,
                        "score": p.score,
                        "query_sense": p.synset_a.byte_offset,
                        "list_sense": p.synset_b.byte_offset,
                    }
                    for p in s.pair_scores
                ],
            }
            for s in report.level_scores
        ],
    }

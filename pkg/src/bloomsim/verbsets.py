"""Taxonomy domains, per-source verb lists, and consensus verb sets.

A verb set starts life as several per-institution lists that rarely agree.
The consensus rule keeps a verb outright when enough sources put it at the
same level, keeps it conditionally when support is thinner but nothing
contradicts it, and drops it otherwise. Every verb that appears anywhere
gets a provenance record saying what happened to it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .wordnet import normalize_lemma


class VerbsetError(Exception):
    pass


class MalformedRowError(VerbsetError):
    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.line_no = line_no


class UnknownLevelError(VerbsetError):
    pass


class UnknownDomainError(VerbsetError):
    pass


class DomainMismatchError(VerbsetError):
    pass


class InsufficientSourcesError(VerbsetError):
    pass


class EmptyLevelError(VerbsetError):
    def __init__(self, domain, level):
        super().__init__(f"level {level!r} of domain {domain!r} has no verbs")
        self.domain = domain
        self.level = level


COGNITIVE = "cognitive"
AFFECTIVE = "affective"
PSYCHOMOTOR = "psychomotor"

# Ordered level names per taxonomy domain, lowest skill first.
DOMAIN_LEVELS: dict[str, tuple[str, ...]] = {
    COGNITIVE: (
        "Knowledge", "Comprehension", "Application",
        "Analysis", "Synthesis", "Evaluation",
    ),
    AFFECTIVE: (
        "Receiving", "Responding", "Valuing",
        "Organization", "Characterization",
    ),
    PSYCHOMOTOR: (
        "Imitation", "Manipulation", "Precision",
        "Articulation", "Naturalization",
    ),
}

KEPT_BY_MAJORITY = "kept-by-majority"
KEPT_CONDITIONALLY = "kept-conditionally"
DROPPED_CONFLICT = "dropped-conflict"
DROPPED_INSUFFICIENT = "dropped-insufficient"


def domain_levels(domain: str) -> tuple[str, ...]:
    try:
        return DOMAIN_LEVELS[domain]
    except KeyError:
        raise UnknownDomainError(f"unknown domain {domain!r}") from None


def canonical_level(domain: str, name: str) -> str:
    """Resolve a level name case-insensitively to its canonical spelling."""
    for level in domain_levels(domain):
        if level.lower() == name.strip().lower():
            return level
    raise UnknownLevelError(f"unknown level {name!r} for domain {domain!r}")


@dataclass(frozen=True)
class SourceVerbList:
    """One institution's verb assignments, already normalized."""

    source_id: str
    domain: str
    entries: dict[str, frozenset[str]]  # level name -> verbs

    def levels_of(self, verb: str) -> tuple[str, ...]:
        """Levels this source assigns ``verb`` to, in domain order."""
        return tuple(
            level for level in domain_levels(self.domain)
            if verb in self.entries.get(level, frozenset())
        )

    def verbs(self) -> frozenset[str]:
        out: set[str] = set()
        for members in self.entries.values():
            out |= members
        return frozenset(out)


@dataclass(frozen=True)
class ProvenanceRecord:
    """What the consensus rule decided about one verb and why."""

    verb: str
    decision: str
    agreement_ratio: float
    supporting_sources: frozenset[str]
    level: str | None  # kept level; single candidate level for
    # insufficient drops; None when sources disagree


@dataclass(frozen=True)
class ConsensusVerbSet:
    domain: str
    entries: dict[str, tuple[str, ...]]  # level -> kept verbs, sorted
    provenance: dict[str, ProvenanceRecord]

    def kept_verbs(self) -> tuple[str, ...]:
        out = []
        for level in domain_levels(self.domain):
            out.extend(self.entries[level])
        return tuple(out)


def parse_source_list(path, source_id: str | None = None) -> SourceVerbList:
    """Read a ``domain<TAB>level<TAB>verb`` file into a SourceVerbList.

    ``#`` lines and blank lines are skipped, duplicate rows collapse, and
    verbs are lowercased with interior spaces turned into underscores.
    All rows must declare the same domain.
    """
    path = Path(path)
    domain = None
    entries: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise MalformedRowError(
                    path, line_no, f"expected 3 tab-separated fields, got {len(fields)}"
                )
            row_domain, row_level, row_verb = (f.strip() for f in fields)
            if row_domain not in DOMAIN_LEVELS:
                raise UnknownDomainError(f"{path}:{line_no}: unknown domain {row_domain!r}")
            if domain is None:
                domain = row_domain
            elif row_domain != domain:
                raise MalformedRowError(
                    path, line_no, f"domain {row_domain!r} differs from {domain!r}"
                )
            level = canonical_level(domain, row_level)
            verb = normalize_lemma(row_verb)
            if not verb:
                raise MalformedRowError(path, line_no, "empty verb field")
            entries.setdefault(level, set()).add(verb)
    if domain is None:
        raise MalformedRowError(path, 0, "no verb rows found")
    frozen = {level: frozenset(verbs) for level, verbs in entries.items()}
    return SourceVerbList(source_id or path.stem, domain, frozen)


def build_consensus(
    sources,
    majority_threshold: float = 0.75,
    conditional_threshold: float = 0.5,
) -> ConsensusVerbSet:
    """Merge source lists into one verb set via threshold agreement.

    For each (verb, level) pair the agreement ratio is the fraction of
    sources assigning the verb to that level. A verb is kept-by-majority
    at a level whose ratio reaches ``majority_threshold``; it is
    kept-conditionally when its single proposed level reaches
    ``conditional_threshold`` and no source puts it anywhere else.
    Everything else is dropped, as a conflict when sources disagree on
    the level and as insufficient support otherwise.
    """
    sources = list(sources)
    if len(sources) < 2:
        raise InsufficientSourcesError(
            f"need at least 2 sources, got {len(sources)}"
        )
    if not (0.0 < conditional_threshold <= majority_threshold <= 1.0):
        raise ValueError(
            "thresholds must satisfy 0 < conditional <= majority <= 1"
        )
    domain = sources[0].domain
    for source in sources[1:]:
        if source.domain != domain:
            raise DomainMismatchError(
                f"source {source.source_id!r} is for domain {source.domain!r}, "
                f"expected {domain!r}"
            )

    levels = domain_levels(domain)
    total = len(sources)
    support: dict[str, dict[str, set[str]]] = {}  # verb -> level -> source ids
    for source in sources:
        for level, verbs in source.entries.items():
            for verb in verbs:
                support.setdefault(verb, {}).setdefault(level, set()).add(
                    source.source_id
                )

    kept: dict[str, list[str]] = {level: [] for level in levels}
    provenance: dict[str, ProvenanceRecord] = {}
    for verb in sorted(support):
        by_level = support[verb]
        ratios = {level: len(ids) / total for level, ids in by_level.items()}
        majority = [lv for lv in levels if ratios.get(lv, 0.0) >= majority_threshold]
        if len(majority) == 1:
            level = majority[0]
            record = ProvenanceRecord(
                verb, KEPT_BY_MAJORITY, ratios[level],
                frozenset(by_level[level]), level,
            )
            kept[level].append(verb)
        elif len(majority) > 1:
            record = _conflict_record(verb, by_level, ratios)
        elif len(by_level) > 1:
            record = _conflict_record(verb, by_level, ratios)
        else:
            (level, ids), = by_level.items()
            ratio = ratios[level]
            if ratio >= conditional_threshold:
                record = ProvenanceRecord(
                    verb, KEPT_CONDITIONALLY, ratio, frozenset(ids), level
                )
                kept[level].append(verb)
            else:
                record = ProvenanceRecord(
                    verb, DROPPED_INSUFFICIENT, ratio, frozenset(ids), level
                )
        provenance[verb] = record

    entries = {level: tuple(sorted(kept[level])) for level in levels}
    return ConsensusVerbSet(domain, entries, provenance)


def _conflict_record(verb, by_level, ratios):
    best_ratio = max(ratios.values())
    all_sources = frozenset(s for ids in by_level.values() for s in ids)
    return ProvenanceRecord(verb, DROPPED_CONFLICT, best_ratio, all_sources, None)


class TaxonomyRegistry:
    """Immutable per-domain verb lists, ordered by level.

    Construct from kept consensus sets via :func:`registry_from`, or
    directly from a ``{domain: {level: verbs}}`` mapping for fixtures.
    """

    def __init__(self, domain_entries: dict[str, dict[str, tuple[str, ...]]]):
        table: dict[str, dict[str, tuple[str, ...]]] = {}
        for domain, entries in domain_entries.items():
            levels = domain_levels(domain)
            per_level = {}
            for level in levels:
                verbs = tuple(normalize_lemma(v) for v in entries.get(level, ()))
                if not verbs:
                    raise EmptyLevelError(domain, level)
                per_level[level] = verbs
            table[domain] = per_level
        self._table = table

    @property
    def domains(self) -> tuple[str, ...]:
        return tuple(self._table)

    def has_domain(self, domain: str) -> bool:
        return domain in self._table

    def levels(self, domain: str) -> tuple[str, ...]:
        if domain not in self._table:
            raise UnknownDomainError(f"domain {domain!r} not registered")
        return domain_levels(domain)

    def verbs(self, domain: str, level: str) -> tuple[str, ...]:
        if domain not in self._table:
            raise UnknownDomainError(f"domain {domain!r} not registered")
        try:
            return self._table[domain][level]
        except KeyError:
            raise UnknownLevelError(
                f"unknown level {level!r} for domain {domain!r}"
            ) from None


def registry_from(*consensus_sets: ConsensusVerbSet) -> TaxonomyRegistry:
    """Materialize consensus sets as a registry; cognitive must be present."""
    domains = {cs.domain: dict(cs.entries) for cs in consensus_sets}
    if COGNITIVE not in domains:
        raise UnknownDomainError("a cognitive consensus set is required")
    return TaxonomyRegistry(domains)


def consensus_to_dict(consensus: ConsensusVerbSet) -> dict:
    levels = {
        level: list(consensus.entries[level])
        for level in domain_levels(consensus.domain)
    }
    provenance = {
        verb: {
            "decision": rec.decision,
            "agreement_ratio": rec.agreement_ratio,
            "supporting_sources": sorted(rec.supporting_sources),
            "level": rec.level,
        }
        for verb, rec in sorted(consensus.provenance.items())
    }
    return {"domain": consensus.domain, "levels": levels, "provenance": provenance}


def consensus_from_dict(payload: dict) -> ConsensusVerbSet:
    domain = payload["domain"]
    levels = domain_levels(domain)
    entries = {
        level: tuple(payload["levels"].get(level, ())) for level in levels
    }
    provenance = {}
    for verb, rec in payload.get("provenance", {}).items():
        provenance[verb] = ProvenanceRecord(
            verb,
            rec["decision"],
            rec["agreement_ratio"],
            frozenset(rec["supporting_sources"]),
            rec.get("level"),
        )
    return ConsensusVerbSet(domain, entries, provenance)


def save_consensus(consensus: ConsensusVerbSet, path) -> None:
    payload = consensus_to_dict(consensus)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=False)
        handle.write("\n")


def load_consensus(path) -> ConsensusVerbSet:
    with open(path, encoding="utf-8") as handle:
        return consensus_from_dict(json.load(handle))


def bundled_consensus_path() -> Path:
    """The cognitive-domain consensus JSON shipped with the package."""
    return Path(__file__).resolve().parent / "data" / "cognitive.consensus.json"

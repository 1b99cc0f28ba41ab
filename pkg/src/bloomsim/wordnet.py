"""In-memory WordNet lexicon loaded from WNDB database files.

Parses the standard ``index.<pos>`` / ``data.<pos>`` / ``<pos>.exc`` files
into an immutable store that supports lemma lookup, Morphy lemmatization,
hypernym traversal, depth queries and least-common-subsumer queries.

Only hypernym pointers take part in the taxonomy; all other pointer types
are parsed and discarded. Because the verb hierarchy is a forest, a
virtual root (depth 1) is placed above every top-level synset so that any
two same-pos synsets have a common ancestor.

A loaded store is never mutated, so it can be shared across threads
without locking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

NOUN = "n"
VERB = "v"
ADJECTIVE = "a"
ADVERB = "r"

POS_TAGS = (NOUN, VERB, ADJECTIVE, ADVERB)

_POS_FILE_NAMES = {NOUN: "noun", VERB: "verb", ADJECTIVE: "adj", ADVERB: "adv"}

# Morphy suffix-detachment rules, tried in order. Candidates survive only
# if the detached form is present in the lemma index.
_DETACHMENT_RULES = {
    NOUN: (
        ("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"),
        ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y"),
    ),
    VERB: (
        ("s", ""), ("ies", "y"), ("es", "e"), ("es", ""),
        ("ed", "e"), ("ed", ""), ("ing", "e"), ("ing", ""),
    ),
    ADJECTIVE: (("er", ""), ("est", ""), ("er", "e"), ("est", "e")),
    ADVERB: (),
}

_ADJ_MARKER = re.compile(r"\((a|p|ip)\)$")


class WordNetError(Exception):
    """Base class for lexicon load and query failures."""


class MissingFileError(WordNetError):
    pass


class MalformedLineError(WordNetError):
    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = str(path)
        self.line_no = line_no


class DanglingPointerError(WordNetError):
    pass


class UnknownSynsetError(WordNetError):
    pass


class PosMismatchError(WordNetError):
    pass


@dataclass(frozen=True, order=True)
class SynsetId:
    """Identity of one synset: byte offset in its data file plus pos tag."""

    byte_offset: int
    pos: str

    def __post_init__(self):
        if self.byte_offset < 0:
            raise ValueError(f"negative byte offset: {self.byte_offset}")
        if self.pos not in POS_TAGS:
            raise ValueError(f"invalid pos tag: {self.pos!r}")


class _VirtualRoot:
    """Sentinel ancestor above every top-level synset; depth is always 1."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "<virtual root>"


VIRTUAL_ROOT = _VirtualRoot()
VIRTUAL_ROOT_DEPTH = 1


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    lemmas: tuple[str, ...]
    hypernyms: tuple[SynsetId, ...]
    gloss: str


def normalize_lemma(text: str) -> str:
    """Lowercase and underscore-join, the on-disk lemma convention."""
    return "_".join(text.strip().lower().split())


class LexicalStore:
    """Immutable lexicon; construct via :func:`load_database`."""

    def __init__(self, synsets, lemma_index, exceptions, version):
        self._synsets: dict[SynsetId, Synset] = synsets
        self._lemma_index: dict[tuple[str, str], tuple[SynsetId, ...]] = lemma_index
        self._exceptions: dict[tuple[str, str], tuple[str, ...]] = exceptions
        self._version = version
        self._depths = _compute_depths(synsets)

    @property
    def version(self) -> str:
        """Version string found in the data file headers, e.g. ``3.1``."""
        return self._version

    def __len__(self):
        return len(self._synsets)

    def __contains__(self, sid):
        return sid in self._synsets

    def synset(self, sid: SynsetId) -> Synset:
        try:
            return self._synsets[sid]
        except KeyError:
            raise UnknownSynsetError(f"unknown synset {sid}") from None

    def all_ids(self, pos: str | None = None):
        if pos is None:
            return tuple(self._synsets)
        return tuple(s for s in self._synsets if s.pos == pos)

    def all_lemmas(self, pos: str):
        return tuple(l for (l, p) in self._lemma_index if p == pos)

    def synsets_of(self, lemma: str, pos: str) -> tuple[SynsetId, ...]:
        """All synsets listing ``lemma`` for ``pos``, in database index order.

        Lookup is case-insensitive and interior spaces are treated as
        underscores. Unknown lemmas yield an empty tuple.
        """
        return self._lemma_index.get((normalize_lemma(lemma), pos), ())

    def lemmatize(self, form: str, pos: str) -> tuple[str, ...]:
        """Morphy: exception-list lookup, then iterative suffix detachment.

        The original form comes first when it is itself indexed; every
        returned form is guaranteed to be in the lemma index. Returns an
        empty tuple when no indexed base form exists.
        """
        form = normalize_lemma(form)
        found: list[str] = []
        if (form, pos) in self._lemma_index:
            found.append(form)
        for base in self._exceptions.get((form, pos), ()):
            if (base, pos) in self._lemma_index and base not in found:
                found.append(base)
        # Iterate detachment until no new candidate form appears.
        queue = [form]
        seen = {form}
        while queue:
            current = queue.pop(0)
            for suffix, replacement in _DETACHMENT_RULES.get(pos, ()):
                if not current.endswith(suffix) or len(current) <= len(suffix):
                    continue
                candidate = current[: -len(suffix)] + replacement
                if candidate in seen:
                    continue
                seen.add(candidate)
                queue.append(candidate)
                if (candidate, pos) in self._lemma_index and candidate not in found:
                    found.append(candidate)
        return tuple(found)

    def depth(self, sid: SynsetId) -> int:
        """Node count from the virtual root, minimized over hypernym paths."""
        try:
            return self._depths[sid]
        except KeyError:
            raise UnknownSynsetError(f"unknown synset {sid}") from None

    def hypernym_ancestors(self, sid: SynsetId):
        """Every ancestor of ``sid`` (itself and the virtual root included),
        as a set of ``(synset_or_virtual_root, depth)`` pairs."""
        if sid not in self._synsets:
            raise UnknownSynsetError(f"unknown synset {sid}")
        out = {(VIRTUAL_ROOT, VIRTUAL_ROOT_DEPTH)}
        stack = [sid]
        visited = set()
        while stack:
            node = stack.pop()
            if node in visited:
                continue
            visited.add(node)
            out.add((node, self._depths[node]))
            stack.extend(self._synsets[node].hypernyms)
        return out

    def least_common_subsumer(self, a: SynsetId, b: SynsetId):
        """Deepest common ancestor of ``a`` and ``b`` as ``(ancestor, depth)``.

        Always defined because the virtual root subsumes everything.
        Equal-depth ties go to the smallest byte offset.

        Multi-parent nodes make "deepest" tricky: under the min-path
        depth convention an ancestor can sit deeper than its descendant,
        which would push Wu-Palmer above 1. Ancestors deeper than
        min(depth(a), depth(b)) are therefore excluded, so the reported
        depth never exceeds either argument's depth. The virtual root
        is never excluded, so a result always exists.
        """
        if a.pos != b.pos:
            raise PosMismatchError(f"cannot compare {a.pos!r} with {b.pos!r}")
        ancestors_a = dict(self.hypernym_ancestors(a))
        ancestors_b = dict(self.hypernym_ancestors(b))
        common = ancestors_a.keys() & ancestors_b.keys()
        cap = min(self._depths[a], self._depths[b])
        best = None
        best_key = None
        for node in common:
            depth = ancestors_a[node]
            if depth > cap:
                continue
            offset = -1 if node is VIRTUAL_ROOT else node.byte_offset
            key = (-depth, offset)
            if best_key is None or key < best_key:
                best_key = key
                best = (node, depth)
        return best


def _compute_depths(synsets):
    """Min-path node-count depth for every synset; roots sit at depth 2."""
    depths: dict[SynsetId, int] = {}
    for start in synsets:
        if start in depths:
            continue
        stack = [(start, False)]
        in_progress = set()
        while stack:
            sid, expanded = stack.pop()
            if expanded:
                in_progress.discard(sid)
                hyps = synsets[sid].hypernyms
                if hyps:
                    depths[sid] = 1 + min(depths[h] for h in hyps)
                else:
                    depths[sid] = 1 + VIRTUAL_ROOT_DEPTH
                continue
            if sid in depths:
                continue
            if sid in in_progress:
                raise WordNetError(f"hypernym cycle involving {sid}")
            in_progress.add(sid)
            stack.append((sid, True))
            for h in synsets[sid].hypernyms:
                if h not in depths:
                    stack.append((h, False))
    return depths


def _data_lines(path):
    """Yield (line_no, line) skipping the two-space license header."""
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if line.startswith(" ") or not line.strip():
                continue
            yield line_no, line.rstrip("\n")


def _parse_data_file(path, pos):
    synsets = {}
    version = None
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if line.startswith(" "):
                if version is None:
                    match = re.search(r"WordNet (\d+\.\d+)", line)
                    if match:
                        version = match.group(1)
                continue
            if not line.strip():
                continue
            sid, synset = _parse_data_line(line.rstrip("\n"), pos, path, line_no)
            synsets[sid] = synset
    return synsets, version


def _parse_data_line(line, pos, path, line_no):
    head, _, gloss = line.partition("|")
    tokens = head.split()
    try:
        offset = int(tokens[0])
        ss_type = tokens[2]
        w_cnt = int(tokens[3], 16)
        lemmas = []
        i = 4
        for _ in range(w_cnt):
            word = _ADJ_MARKER.sub("", tokens[i])
            lemmas.append(normalize_lemma(word))
            i += 2  # skip lex_id
        p_cnt = int(tokens[i])
        i += 1
        hypernyms = []
        for _ in range(p_cnt):
            symbol, ptr_offset, ptr_pos = tokens[i], tokens[i + 1], tokens[i + 2]
            i += 4
            if ptr_pos == "s":
                ptr_pos = ADJECTIVE
            # Only the is-a taxonomy matters downstream.
            if symbol.startswith("@") and ptr_pos == pos:
                hypernyms.append(SynsetId(int(ptr_offset), pos))
    except (IndexError, ValueError) as exc:
        raise MalformedLineError(path, line_no, f"bad data line: {exc}") from None
    if ss_type not in ("n", "v", "a", "s", "r"):
        raise MalformedLineError(path, line_no, f"bad synset type {ss_type!r}")
    if not lemmas:
        raise MalformedLineError(path, line_no, "synset has no words")
    sid = SynsetId(offset, pos)
    if sid in hypernyms:
        raise MalformedLineError(path, line_no, "synset is its own hypernym")
    return sid, Synset(sid, tuple(lemmas), tuple(hypernyms), gloss.strip())


def _parse_index_file(path, pos):
    index = {}
    for line_no, line in _data_lines(path):
        tokens = line.split()
        try:
            lemma = normalize_lemma(tokens[0])
            synset_cnt = int(tokens[2])
            p_cnt = int(tokens[3])
            offsets = tokens[4 + p_cnt + 2:]
            if len(offsets) != synset_cnt:
                raise ValueError(
                    f"expected {synset_cnt} offsets, found {len(offsets)}"
                )
            ids = tuple(SynsetId(int(off), pos) for off in offsets)
        except (IndexError, ValueError) as exc:
            raise MalformedLineError(path, line_no, f"bad index line: {exc}") from None
        index[(lemma, pos)] = ids
    return index


def _parse_exception_file(path, pos):
    exceptions = {}
    for line_no, line in _data_lines(path):
        tokens = [normalize_lemma(t) for t in line.split()]
        if len(tokens) < 2:
            raise MalformedLineError(path, line_no, "expected inflected form plus base")
        exceptions[(tokens[0], pos)] = tuple(dict.fromkeys(tokens[1:]))
    return exceptions


def load_database(directory_path) -> LexicalStore:
    """Load a WNDB directory into a :class:`LexicalStore`.

    The verb files (``index.verb``, ``data.verb``, ``verb.exc``) are
    required; files for the other parts of speech are loaded when present.
    """
    directory = Path(directory_path)
    for name in ("index.verb", "data.verb", "verb.exc"):
        if not (directory / name).is_file():
            raise MissingFileError(f"required file missing: {directory / name}")

    synsets: dict[SynsetId, Synset] = {}
    lemma_index: dict[tuple[str, str], tuple[SynsetId, ...]] = {}
    exceptions: dict[tuple[str, str], tuple[str, ...]] = {}
    version = None
    for pos, file_pos in _POS_FILE_NAMES.items():
        data_path = directory / f"data.{file_pos}"
        index_path = directory / f"index.{file_pos}"
        if not data_path.is_file() or not index_path.is_file():
            continue
        pos_synsets, pos_version = _parse_data_file(data_path, pos)
        synsets.update(pos_synsets)
        lemma_index.update(_parse_index_file(index_path, pos))
        exc_path = directory / f"{file_pos}.exc"
        if exc_path.is_file():
            exceptions.update(_parse_exception_file(exc_path, pos))
        if version is None:
            version = pos_version

    _validate_links(synsets, lemma_index)
    return LexicalStore(synsets, lemma_index, exceptions, version or "unknown")


def _validate_links(synsets, lemma_index):
    for synset in synsets.values():
        for hyp in synset.hypernyms:
            if hyp not in synsets:
                raise DanglingPointerError(
                    f"{synset.id} points to missing hypernym {hyp}"
                )
    for (lemma, pos), ids in lemma_index.items():
        for sid in ids:
            if sid not in synsets:
                raise DanglingPointerError(
                    f"index entry {lemma!r}/{pos} references missing synset {sid}"
                )
            if lemma not in synsets[sid].lemmas:
                raise DanglingPointerError(
                    f"index entry {lemma!r}/{pos} not listed by synset {sid}"
                )


def bundled_database_path() -> Path:
    """Directory of the WordNet verb files shipped with the package."""
    return Path(__file__).resolve().parent / "data" / "wordnet"

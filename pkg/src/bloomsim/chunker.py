"""Question splitting, tokenization, and action-verb extraction.

The extractor is a partial parser over question-starter patterns. Each
pattern anchors a sequence of literal words at the start of the question
and one verb slot; the slot binds to the first later token that has a
verb base form and is not an auxiliary. When no pattern matches, the
fallback scans the whole question for the first such token.

Patterns match over word tokens only, so stray punctuation between
starter words never breaks a match.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .wordnet import VERB, LexicalStore


class ChunkerError(Exception):
    pass


class GrammarError(ChunkerError):
    pass


class NoVerbFoundError(ChunkerError):
    """No token of the question resolves to a non-auxiliary verb."""

    def __init__(self, question):
        super().__init__(f"no action verb found in {question!r}")
        self.question = question


# Auxiliaries and modals never count as the action verb.
AUXILIARIES = frozenset((
    "be", "is", "are", "was", "were", "do", "does", "did",
    "have", "has", "had", "would", "could", "should",
    "can", "may", "might", "will", "shall", "must",
))

VERB_SLOT = "<VERB>"

_SENTENCE_BREAK = re.compile(r"(?<=[?.!])\s+")
_CHUNK = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    span: tuple[int, int]

    def __post_init__(self):
        if self.span[0] >= self.span[1]:
            raise ValueError(f"empty span for token {self.surface!r}")

    @property
    def is_word(self) -> bool:
        return any(ch.isalnum() for ch in self.surface)


@dataclass(frozen=True)
class StarterPattern:
    """One grammar rule: literal starter words around a single verb slot."""

    label: str
    priority: int
    elements: tuple[str, ...]  # literal words, with VERB_SLOT once

    def __post_init__(self):
        if not self.label:
            raise GrammarError("pattern label must be non-empty")
        if not self.elements:
            raise GrammarError("pattern must have at least one element")
        if self.elements.count(VERB_SLOT) != 1:
            raise GrammarError(
                f"pattern {self.text!r} must contain exactly one {VERB_SLOT}"
            )

    @property
    def text(self) -> str:
        return " ".join(self.elements)


@dataclass(frozen=True)
class ChunkResult:
    action_verb: str
    level_hint: str | None
    matched_pattern: StarterPattern | None
    matched_span: tuple[int, int]

    def __post_init__(self):
        if not self.action_verb:
            raise ValueError("action_verb must be non-empty")
        if self.matched_span[0] >= self.matched_span[1]:
            raise ValueError("matched_span must be non-empty")
        if self.matched_pattern is not None:
            if self.level_hint != self.matched_pattern.label:
                raise ValueError("level_hint must equal the pattern label")
        elif self.level_hint is not None:
            raise ValueError("level_hint requires a matched pattern")


def split_questions(text: str) -> list[str]:
    """Break raw text into questions on line breaks and on terminal
    punctuation (?, ., !) followed by whitespace."""
    questions = []
    for line in text.splitlines():
        for piece in _SENTENCE_BREAK.split(line):
            piece = piece.strip()
            if piece:
                questions.append(piece)
    return questions


def tokenize(question: str) -> list[Token]:
    """Whitespace tokenization with leading/trailing punctuation split off.

    Interior punctuation (hyphens, apostrophes) stays inside the word, so
    "five-year-old" is one token while a trailing "?" becomes its own.
    """
    tokens: list[Token] = []

    def emit(start, end):
        surface = question[start:end]
        tokens.append(Token(surface, surface.lower(), (start, end)))

    for match in _CHUNK.finditer(question):
        start, end = match.start(), match.end()
        left = start
        while left < end and not question[left].isalnum():
            emit(left, left + 1)
            left += 1
        right = end
        trailing = []
        while right > left and not question[right - 1].isalnum():
            trailing.append((right - 1, right))
            right -= 1
        if left < right:
            emit(left, right)
        for span in reversed(trailing):
            emit(*span)
    return tokens


def parse_grammar(path) -> tuple[StarterPattern, ...]:
    """Load ``label<TAB>priority<TAB>pattern`` rules, keeping file order."""
    patterns = []
    path = Path(path)
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise GrammarError(
                    f"{path}:{line_no}: expected 3 tab-separated fields"
                )
            label, priority_text, pattern_text = (f.strip() for f in fields)
            try:
                priority = int(priority_text)
            except ValueError:
                raise GrammarError(
                    f"{path}:{line_no}: priority {priority_text!r} is not an integer"
                ) from None
            elements = tuple(
                e if e == VERB_SLOT else e.lower() for e in pattern_text.split()
            )
            try:
                patterns.append(StarterPattern(label, priority, elements))
            except GrammarError as exc:
                raise GrammarError(f"{path}:{line_no}: {exc}") from None
    if not patterns:
        raise GrammarError(f"{path}: no patterns found")
    return tuple(patterns)


def bundled_grammar_path() -> Path:
    return Path(__file__).resolve().parent / "data" / "grammar.tsv"


def _is_verb_capable(store: LexicalStore, token: Token) -> bool:
    bases = store.lemmatize(token.lower, VERB)
    if not bases:
        return False
    if token.lower in AUXILIARIES:
        return False
    return not any(base in AUXILIARIES for base in bases)


def _bind_slot(store, words, position):
    """First verb-capable non-auxiliary word token at or after position."""
    for token in words[position:]:
        if _is_verb_capable(store, token):
            return token
    return None


def extract_action_verb(
    store: LexicalStore,
    grammar,
    question: str,
) -> ChunkResult:
    """Find the main action verb of one question.

    Patterns are tried in descending priority (file order breaks ties);
    the first whose starter literals match the question's opening words
    and whose slot binds wins. Without a match, the first non-auxiliary
    verb-capable token is the verb and no level hint is reported.
    """
    grammar = tuple(grammar)
    if not grammar:
        raise GrammarError("grammar must contain at least one pattern")
    words = [t for t in tokenize(question) if t.is_word]
    ordered = sorted(
        range(len(grammar)), key=lambda i: (-grammar[i].priority, i)
    )
    for index in ordered:
        pattern = grammar[index]
        bound = _match_pattern(store, pattern, words)
        if bound is not None:
            token, start = bound
            base = store.lemmatize(token.lower, VERB)[0]
            return ChunkResult(
                base, pattern.label, pattern, (start, token.span[1])
            )
    for token in words:
        if _is_verb_capable(store, token):
            base = store.lemmatize(token.lower, VERB)[0]
            return ChunkResult(base, None, None, token.span)
    raise NoVerbFoundError(question)


def _match_pattern(store, pattern, words):
    """Match starter literals from the first word onward, then bind the slot.

    Returns ``(bound_token, match_start_offset)`` or None.
    """
    position = 0
    match_start = None
    for element in pattern.elements:
        if element == VERB_SLOT:
            token = _bind_slot(store, words, position)
            if token is None:
                return None
            if match_start is None:
                match_start = token.span[0]
            return token, match_start
        if position >= len(words) or words[position].lower != element:
            return None
        if match_start is None:
            match_start = words[position].span[0]
        position += 1
    return None

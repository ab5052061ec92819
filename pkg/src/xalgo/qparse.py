"""Question feature extraction and rule-based classification.

The pipeline is lexicon-driven throughout: keyword tables for interrogative
words, an auxiliary-verb list for yes/no detection, tense words plus the
temporal anchors next/last/after/before for time shifts, and token matching
against the session vocabulary for entity resolution. Concept questions are
filtered first against a hand-written knowledge base; everything else routes
through the interrogative word to one of the five state-question types,
with "why" deliberately yielding both Causality and Rationale since answers
covering both read as one complete explanation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import EmptyQuestion, Unclassifiable, ValidationError
from .ir import Diagnostic


class QuestionType(str, Enum):
    CONCEPT = "Concept"
    DESCRIPTION = "Description"
    CONFIRMATION = "Confirmation"
    CAUSALITY = "Causality"
    RATIONALE = "Rationale"
    CONTRAST = "Contrast"


WH_NONE = "none"
WH_WHAT = "what"
WH_WHY = "why"
WH_WHY_NOT = "whyNot"
WH_HOW = "how"
WH_WHAT_IF = "whatIf"
WH_YES_NO = "yesNoAux"

TENSE_PAST = "past"
TENSE_PRESENT = "present"
TENSE_FUTURE = "future"
TENSE_NONE = "none"

AUX_WORDS = {
    "is", "are", "was", "were", "am", "do", "does", "did", "will", "would",
    "can", "could", "should", "shall", "has", "have", "had", "must",
}

# question-side action mentions; node-side matching maps move -> swap
ACTION_WORDS = {
    "swap": "swap", "swaps": "swap", "swapped": "swap", "swapping": "swap",
    "switch": "swap", "switched": "swap", "exchange": "swap", "exchanged": "swap",
    "move": "move", "moves": "move", "moved": "move", "moving": "move",
    "increment": "increment", "increments": "increment",
    "incremented": "increment", "incrementing": "increment",
    "increase": "increment", "increased": "increment",
    "compare": "compare", "compares": "compare", "compared": "compare",
    "comparing": "compare", "comparison": "compare",
    "select": "select", "selects": "select", "selected": "select",
    "selecting": "select", "choose": "select", "chose": "select",
    "chosen": "select", "pick": "select", "picked": "select", "picks": "select",
    "sort": "sort", "sorts": "sort", "sorted": "sort", "sorting": "sort",
}

_PAST_ACTION_FORMS = {
    w for w in ACTION_WORDS
    if w.endswith("ed") or w in ("chose", "chosen")
}
_PAST_MARKERS = {"did", "was", "were", "had"}
_FUTURE_MARKERS = {"will", "shall", "gonna"}

# words that anchor a question to the algorithm even without resolved
# entities; used to tell state questions from off-topic ones
DOMAIN_WORDS = {
    "algorithm", "array", "code", "compare", "comparison", "element",
    "elements", "happen", "happened", "happening", "happens", "here",
    "iteration", "index", "loop", "now", "number", "numbers", "partition",
    "pivot", "position", "pseudocode", "recursion", "sort", "sorted",
    "sorting", "state", "step", "steps", "subarray", "value", "values",
}

_STOPWORDS = {
    "a", "an", "the", "is", "are", "was", "were", "am", "be", "been", "being",
    "do", "does", "did", "done", "doing", "will", "would", "can", "could",
    "should", "shall", "have", "has", "had", "having", "to", "of", "in", "on",
    "at", "it", "its", "this", "that", "these", "those", "what", "why", "how",
    "when", "who", "which", "where", "not", "no", "yes", "i", "we", "you",
    "they", "he", "she", "me", "my", "your", "our", "their", "and", "or",
    "but", "if", "then", "than", "as", "for", "with", "about", "into", "out",
    "over", "up", "down", "there", "here", "so", "just", "like", "get",
    "gets", "got", "mean", "means",
    # deixis: these refer to the execution state, never to concept content
    "now", "right", "currently", "moment", "step", "happen", "happens",
    "happened", "happening",
}

# tokens that tie a question to the current execution state
_DEICTIC_WORDS = {"now", "currently", "here", "happening", "happens", "happened"}

# markers that make a question about general behavior rather than one state
_GENERIC_WORDS = {"always", "ever", "usually", "generally", "every", "each"}

# token-overlap floor for nearest-match concept lookup; accepts paraphrases
# of known terms while rejecting state questions about concrete elements
SIMILARITY_FLOOR = 0.3

_TOKEN_RE = re.compile(r"[A-Za-z_]+|\d+")


@dataclass(frozen=True)
class ConceptEntry:
    term: str
    aliases: tuple[str, ...]
    answer_text: str


@dataclass(frozen=True)
class ConceptMatch:
    entry: ConceptEntry
    exact: bool
    score: float


@dataclass(frozen=True)
class Entity:
    kind: str  # "variable" | "element" | "concept"
    name: str
    value: int | None = None

    def __str__(self) -> str:
        return f"{self.kind}({self.name})"


@dataclass(frozen=True)
class Anchor:
    relation: str  # "after" | "before" | "next" | "last"
    action: str | None = None


@dataclass(frozen=True)
class TimeShift:
    tense: str = TENSE_NONE
    anchor: Anchor | None = None


@dataclass
class Vocabulary:
    """Entities resolvable in the current session."""

    variables: set[str] = field(default_factory=set)
    elements: set[int] = field(default_factory=set)
    concepts: set[str] = field(default_factory=set)

    def variable_lookup(self) -> dict[str, str]:
        return {v.lower(): v for v in self.variables}


@dataclass
class QuestionFeatures:
    raw_text: str
    interrogative_word: str
    time_shift: TimeShift
    objects: list[Entity]
    values: list[int]
    action: str | None
    unknown_mentions: list[str]
    alternative: str | None = None  # proposed alternative, whyNot/whatIf only

    def to_dict(self) -> dict:
        return {
            "rawText": self.raw_text,
            "interrogativeWord": self.interrogative_word,
            "timeShift": {
                "tense": self.time_shift.tense,
                "anchor": (
                    {"relation": self.time_shift.anchor.relation,
                     "action": self.time_shift.anchor.action}
                    if self.time_shift.anchor
                    else None
                ),
            },
            "objects": [
                {"kind": e.kind, "name": e.name, "value": e.value} for e in self.objects
            ],
            "values": list(self.values),
            "action": self.action,
            "unknownMentions": list(self.unknown_mentions),
            "alternative": self.alternative,
        }


def tokenize(text: str) -> list[str]:
    text = text.lower().replace("n't", " not").replace("'s", " is")
    return _TOKEN_RE.findall(text)


def stem(token: str) -> str:
    """Rough suffix stripper, only used for concept-table overlap."""
    for suffix in ("ing", "ed", "es", "s"):
        if token.endswith(suffix) and len(token) - len(suffix) >= 3:
            token = token[: -len(suffix)]
            break
    if len(token) >= 4 and token[-1] == token[-2] and token[-1] not in "aeiou":
        token = token[:-1]
    return token


# ---------------------------------------------------------------------------
# feature extraction


def extract_features(text: str, vocabulary: Vocabulary | None = None) -> QuestionFeatures:
    """Populate all question features; deterministic in (text, vocabulary)."""
    if vocabulary is None:
        vocabulary = Vocabulary()
    if not text or not text.strip():
        raise EmptyQuestion("question is empty")
    tokens = tokenize(text)
    if not tokens:
        raise EmptyQuestion("question has no words")

    interrogative, alternative = _interrogative(tokens, text)
    anchor = _anchor(tokens)
    tense = _tense(tokens, anchor)
    objects, values, unknown = _resolve_entities(tokens, vocabulary, text)
    action = _main_action(tokens, anchor)

    return QuestionFeatures(
        raw_text=text,
        interrogative_word=interrogative,
        time_shift=TimeShift(tense=tense, anchor=anchor),
        objects=objects,
        values=values,
        action=action,
        unknown_mentions=unknown,
        alternative=alternative,
    )


def _interrogative(tokens: list[str], raw: str) -> tuple[str, str | None]:
    lowered = raw.lower()
    for i, tok in enumerate(tokens):
        if tok == "why":
            rest = tokens[i + 1:]
            if rest[:1] == ["not"] or (len(rest) >= 2 and rest[0] in AUX_WORDS and rest[1] == "not"):
                return WH_WHY_NOT, _alternative_after(lowered, "why not") or _alternative_after_negation(tokens, i)
            return WH_WHY, None
        if tok == "what":
            if tokens[i + 1: i + 2] == ["if"]:
                return WH_WHAT_IF, _alternative_after(lowered, "what if")
            return WH_WHAT, None
        if tok == "how":
            return WH_HOW, None
        if i == 0 and tok in AUX_WORDS:
            return WH_YES_NO, None
    if any(tok in AUX_WORDS for tok in tokens):
        return WH_YES_NO, None
    return WH_NONE, None


def _alternative_after(lowered: str, marker: str) -> str | None:
    pos = lowered.find(marker)
    if pos < 0:
        return None
    rest = lowered[pos + len(marker):].strip().strip("?.!,")
    return rest or None


def _alternative_after_negation(tokens: list[str], why_pos: int) -> str | None:
    # "why didn't X ..." -> alternative is everything after the negation
    rest = tokens[why_pos + 1:]
    if rest[:1] and rest[0] in AUX_WORDS and rest[1:2] == ["not"]:
        tail = rest[2:]
        return " ".join(tail) or None
    return None


def _anchor(tokens: list[str]) -> Anchor | None:
    skippable = {"the", "a", "an", "we", "it", "they"}
    for i, tok in enumerate(tokens):
        if tok in ("after", "before"):
            j = i + 1
            while j < len(tokens) and tokens[j] in skippable:
                j += 1
            action = ACTION_WORDS.get(tokens[j]) if j < len(tokens) else None
            return Anchor(relation=tok, action=action)
        if tok in ("next", "last", "previous"):
            relation = "next" if tok == "next" else "last"
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            if nxt in ACTION_WORDS:
                return Anchor(relation=relation, action=ACTION_WORDS[nxt])
            # bare next/last only counts as temporal when it is not an
            # adjective on some other noun ("the last element")
            if nxt in (None, "step", "one", "time"):
                return Anchor(relation=relation, action=None)
    return None


def _tense(tokens: list[str], anchor: Anchor | None) -> str:
    if anchor is not None:
        return TENSE_FUTURE if anchor.relation in ("after", "next") else TENSE_PAST
    if any(tok in _FUTURE_MARKERS for tok in tokens) or "going" in tokens:
        return TENSE_FUTURE
    if any(tok in _PAST_MARKERS for tok in tokens):
        return TENSE_PAST
    if any(tok in _PAST_ACTION_FORMS for tok in tokens):
        # bare participles ("Is X swapped?") stay present; a past form with
        # no auxiliary at all ("it moved?") reads as past
        if not any(tok in AUX_WORDS for tok in tokens):
            return TENSE_PAST
    if tokens and tokens[0] in ("is", "are", "does", "do", "am"):
        return TENSE_PRESENT
    return TENSE_NONE


def _resolve_entities(
    tokens: list[str], vocabulary: Vocabulary, raw_text: str
) -> tuple[list[Entity], list[int], list[str]]:
    raw_tokens = _TOKEN_RE.findall(raw_text.replace("n't", " not"))
    variables = vocabulary.variable_lookup()
    concepts = {c.lower() for c in vocabulary.concepts}
    objects: list[Entity] = []
    values: list[int] = []
    unknown: list[str] = []
    seen: set[tuple[str, str]] = set()

    def add(entity: Entity):
        key = (entity.kind, entity.name)
        if key not in seen:
            seen.add(key)
            objects.append(entity)

    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.isdigit():
            value = int(tok)
            values.append(value)
            if value in vocabulary.elements:
                add(Entity("element", str(value), value))
            else:
                unknown.append(tok)
            i += 1
            continue
        bigram = f"{tok} {tokens[i + 1]}" if i + 1 < len(tokens) else None
        joined = (tok + tokens[i + 1]) if i + 1 < len(tokens) else None
        if joined and joined in variables:
            add(Entity("variable", variables[joined]))
            i += 2
            continue
        if bigram and bigram in concepts:
            add(Entity("concept", bigram))
            i += 2
            continue
        if tok in _STOPWORDS:
            # articles and auxiliaries never name entities, even when a
            # definition uses a colliding variable name like "a"
            i += 1
            continue
        if tok in variables:
            add(Entity("variable", variables[tok]))
        elif tok in concepts:
            add(Entity("concept", tok))
        elif i < len(raw_tokens) and _looks_like_identifier(raw_tokens[i]):
            unknown.append(raw_tokens[i])
        i += 1
    return objects, values, unknown


def _looks_like_identifier(token: str) -> bool:
    return "_" in token or (any(c.isupper() for c in token) and not token.isupper())


def _main_action(tokens: list[str], anchor: Anchor | None) -> str | None:
    """First action mention that is not part of the temporal anchor phrase."""
    anchored = set()
    for i, tok in enumerate(tokens):
        if tok in ("after", "before", "next", "last", "previous"):
            for j in range(i + 1, min(i + 3, len(tokens))):
                if tokens[j] in ACTION_WORDS:
                    anchored.add(j)
                    break
    for i, tok in enumerate(tokens):
        if tok in ACTION_WORDS and i not in anchored:
            return ACTION_WORDS[tok]
    return None


# ---------------------------------------------------------------------------
# concept table


def load_concepts(source: str | dict) -> list[ConceptEntry]:
    """Load a concept knowledge base; terms and aliases must be unique."""
    doc = json.loads(source) if isinstance(source, str) else source
    entries = [
        ConceptEntry(
            term=item["term"],
            aliases=tuple(item.get("aliases", [])),
            answer_text=item["answer"],
        )
        for item in doc.get("concepts", [])
    ]
    seen: set[str] = set()
    diags: list[Diagnostic] = []
    for entry in entries:
        for name in (entry.term, *entry.aliases):
            lowered = name.lower()
            if lowered in seen:
                diags.append(Diagnostic(None, f"duplicate concept term/alias {name!r}"))
            seen.add(lowered)
    if diags:
        raise ValidationError(diags)
    return entries


def load_concepts_file(path: str | Path) -> list[ConceptEntry]:
    return load_concepts(Path(path).read_text())


def match_concept(features: QuestionFeatures, kb: list[ConceptEntry]) -> ConceptMatch | None:
    """Find the concept entry a question is about, if any.

    A definitional question whose subject is a known term or alias is an
    exact hit. Otherwise the entry with the highest stemmed token overlap
    wins, provided it clears SIMILARITY_FLOOR, so near-miss phrasings still
    get the closest table entry. Questions that carry concrete integer
    literals are about execution state, never about concepts.
    """
    if not kb:
        return None
    if features.values:
        return None

    subject = _definitional_subject(features.raw_text)
    if subject is not None:
        subject_stems = tuple(stem(t) for t in tokenize(subject))
        for entry in kb:
            for name in (entry.term, *entry.aliases):
                if subject_stems == tuple(stem(t) for t in tokenize(name)):
                    return ConceptMatch(entry, exact=True, score=1.0)

    question_tokens = tokenize(features.raw_text)
    question_stems = {stem(tok) for tok in question_tokens if tok not in _STOPWORDS}
    question_stems.discard("")
    if not question_stems:
        return None
    best: ConceptMatch | None = None
    for entry in kb:
        bag = set()
        for chunk in (entry.term, *entry.aliases, entry.answer_text):
            bag.update(stem(tok) for tok in tokenize(chunk) if tok not in _STOPWORDS)
        overlap = len(question_stems & bag) / len(question_stems)
        if overlap < SIMILARITY_FLOOR:
            continue
        # a question that literally names the term is about that term
        named = any(
            _subsequence(tokenize(name), question_tokens)
            for name in (entry.term, *entry.aliases)
        )
        score = overlap + (0.5 if named else 0.0)
        if best is None or score > best.score:
            best = ConceptMatch(entry, exact=False, score=score)
    return best


def _subsequence(needle: list[str], haystack: list[str]) -> bool:
    if not needle:
        return False
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i: i + len(needle)] == needle:
            return True
    return False


_DEFINITIONAL_RES = (
    re.compile(r"^\s*what\s+(?:is|are)\s+(?:a|an|the)?\s*(.+?)\s*\??\s*$", re.I),
    re.compile(r"^\s*what\s+does\s+(?:a|an|the)?\s*(.+?)\s+mean\s*\??\s*$", re.I),
    re.compile(r"^\s*define\s+(?:a|an|the)?\s*(.+?)\s*\??\s*$", re.I),
)


def _definitional_subject(text: str) -> str | None:
    for pattern in _DEFINITIONAL_RES:
        match = pattern.match(text)
        if match:
            return match.group(1)
    return None


# ---------------------------------------------------------------------------
# classification


def classify(
    features: QuestionFeatures,
    concept_hit: ConceptMatch | None,
    vocabulary: Vocabulary | None = None,
) -> set[QuestionType]:
    """Map features to a non-empty set of question types.

    Concept routing wins when the question has no state-specific anchoring
    (no element literals, no temporal anchor, no non-concept variable).
    "why" returns the merged {Causality, Rationale} pair; whyNot/whatIf go
    to Contrast; what/how to Description; leading auxiliaries to
    Confirmation. Questions with no interrogative shape, or with nothing
    tying them to the algorithm at all, raise Unclassifiable so the session
    layer can ask the user to rephrase instead of guessing.
    """
    if vocabulary is None:
        vocabulary = Vocabulary()
    iw = features.interrogative_word
    if iw == WH_NONE:
        raise Unclassifiable("no interrogative word or auxiliary verb found")

    if concept_hit is not None and not _state_specific(features, vocabulary):
        return {QuestionType.CONCEPT}

    if iw in (WH_WHY_NOT, WH_WHAT_IF):
        return {QuestionType.CONTRAST}

    if not _anchored_to_algorithm(features, vocabulary):
        raise Unclassifiable("question does not reference the algorithm or its state")

    if iw == WH_WHY:
        return {QuestionType.CAUSALITY, QuestionType.RATIONALE}
    if iw in (WH_WHAT, WH_HOW):
        return {QuestionType.DESCRIPTION}
    return {QuestionType.CONFIRMATION}


def _state_specific(features: QuestionFeatures, vocabulary: Vocabulary) -> bool:
    concepts = {c.lower() for c in vocabulary.concepts}
    if any(e.kind == "element" for e in features.objects):
        return True
    if features.time_shift.anchor is not None:
        return True
    tokens = tokenize(features.raw_text)
    if any(tok in _DEICTIC_WORDS for tok in tokens):
        return True
    # a yes/no question naming an action verifies a state ("Is X swapped?"),
    # unless a genericity marker turns it into a question about policy
    if (
        features.interrogative_word == WH_YES_NO
        and features.action is not None
        and not any(tok in _GENERIC_WORDS for tok in tokens)
    ):
        return True
    for entity in features.objects:
        if entity.kind == "variable" and entity.name.lower() not in concepts:
            return True
    return False


def _anchored_to_algorithm(features: QuestionFeatures, vocabulary: Vocabulary) -> bool:
    if features.objects or features.values or features.action:
        return True
    if features.time_shift.anchor is not None:
        return True
    return any(tok in DOMAIN_WORDS for tok in tokenize(features.raw_text))

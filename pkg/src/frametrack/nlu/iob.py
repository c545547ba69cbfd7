"""Word-level IOB tags derived from span-less act annotations.

Slot values are located in the utterance by normalized token matching and
turned into B/I spans; for each act, every word from its first located
value through its last located value receives the act's tag. Words outside
any span are tagged ``O``. Values that cannot be located contribute no tags
and are reported in ``TaggedUtterance.unmatched``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..model import DialogueAct, Turn
from ..values import value_matches

O_TAG = "O"

# Slots whose values never appear verbatim in the text.
EXCLUDED_SLOTS = frozenset(
    {
        "intent",
        "action",
        "id",
        "ref",
        "read",
        "write",
        "impl_anaphora",
        "count",
        "count_amenities",
        "count_name",
        "count_dst_city",
        "count_seat",
        "count_category",
    }
)

_TRAILING_PUNCT = ".,!?;:"
_TOKEN_RE = re.compile(r"\S+")


def tokenize(text: str) -> list[str]:
    """Whitespace tokens with trailing punctuation split off as own tokens."""
    words: list[str] = []
    for token in _TOKEN_RE.findall(text):
        tail: list[str] = []
        while len(token) > 1 and token[-1] in _TRAILING_PUNCT:
            tail.append(token[-1])
            token = token[:-1]
        words.append(token)
        words.extend(reversed(tail))
    return words


def word_trigrams(word: str) -> list[str]:
    """All character trigrams of a word padded with one ``#`` on each side."""
    if not word:
        raise ValueError("cannot take trigrams of an empty token")
    padded = f"#{word}#"
    return [padded[i : i + 3] for i in range(len(padded) - 2)]


@dataclass
class TaggedUtterance:
    words: list[str]
    slot_tags: list[str]
    act_tags: list[str]
    unmatched: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        if not (len(self.words) == len(self.slot_tags) == len(self.act_tags)):
            raise ValueError("words and tag rows must have equal length")


def _find_span(words: list[str], value: str, taken: list[bool] | None = None) -> tuple[int, int] | None:
    """First window of words matching the tokenized value; windows of
    still-untagged words take precedence so repeated values spread over
    their occurrences."""
    value_tokens = tokenize(value)
    if not value_tokens:
        return None
    n = len(value_tokens)
    matches = [
        (start, start + n)
        for start in range(len(words) - n + 1)
        if all(value_matches(words[start + j], value_tokens[j]) for j in range(n))
    ]
    if not matches:
        return None
    if taken is not None:
        for span in matches:
            if not any(taken[i] for i in range(*span)):
                return span
    return matches[0]


def derive_iob(turn_or_text: Turn | str, acts: list[DialogueAct] | None = None) -> TaggedUtterance:
    """Tag one utterance from its gold acts.

    Accepts either a Turn or an explicit (text, acts) pair.
    """
    if isinstance(turn_or_text, Turn):
        text, acts = turn_or_text.text, list(turn_or_text.acts)
    else:
        text = turn_or_text
        acts = list(acts or [])

    words = tokenize(text)
    slot_tags = [O_TAG] * len(words)
    act_tags = [O_TAG] * len(words)
    taken = [False] * len(words)
    unmatched: list[tuple[str, str]] = []

    for a in acts:
        spans: list[tuple[int, int]] = []
        taggable = list(a.args) + [kv for ref in a.refs for kv in ref.annotation]
        for key, value in taggable:
            if value is None or key in EXCLUDED_SLOTS:
                continue
            span = _find_span(words, value.raw, taken)
            if span is None:
                unmatched.append((key, value.raw))
                continue
            spans.append(span)
            start, end = span
            slot_tags[start] = f"B-{key}"
            taken[start] = True
            for i in range(start + 1, end):
                slot_tags[i] = f"I-{key}"
                taken[i] = True
        if spans:
            first = min(s for s, _ in spans)
            last = max(e for _, e in spans)
            for i in range(first, last):
                act_tags[i] = a.name

    # partially overwritten spans may leave an orphan I-tag; promote it to B
    for i, tag in enumerate(slot_tags):
        if tag.startswith("I-") and (i == 0 or slot_tags[i - 1][2:] != tag[2:] or slot_tags[i - 1] == O_TAG):
            slot_tags[i] = "B-" + tag[2:]

    return TaggedUtterance(words, slot_tags, act_tags, unmatched)


def tag_corpus(dialogues) -> list[TaggedUtterance]:
    """Tag every annotated turn of a corpus; unannotated turns are skipped."""
    tagged = []
    for d in dialogues:
        for turn in d.turns:
            if turn.acts:
                tagged.append(derive_iob(turn))
    return tagged


def dump_tagged(tagged: list[TaggedUtterance]) -> str:
    """One word per line (word TAB act TAB slot), utterances blank-separated."""
    blocks = []
    for utt in tagged:
        blocks.append("\n".join(f"{w}\t{a}\t{s}" for w, a, s in zip(utt.words, utt.act_tags, utt.slot_tags)))
    return "\n\n".join(blocks) + "\n"


def parse_tagged(text: str) -> list[TaggedUtterance]:
    tagged = []
    for block in text.strip().split("\n\n"):
        if not block.strip():
            continue
        words, act_tags, slot_tags = [], [], []
        for line in block.splitlines():
            word, act_tag, slot_tag = line.split("\t")
            words.append(word)
            act_tags.append(act_tag)
            slot_tags.append(slot_tag)
        tagged.append(TaggedUtterance(words, slot_tags, act_tags))
    return tagged

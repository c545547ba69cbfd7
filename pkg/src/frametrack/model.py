"""In-memory data model for dialogues, turns, acts, and frames.

Acts are frozen values (they come out of the parser and are shared freely);
frames, turns, and dialogues are plain dataclasses treated as read-only
after construction. ``validate_dialogue`` reports every invariant breach as
data rather than raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .inventory import REF_KINDS, is_known_act
from .values import normalize_text, value_matches

USER = "user"
WIZARD = "wizard"
AUTHORS = (USER, WIZARD)


@dataclass(frozen=True)
class SlotValue:
    """A raw value text plus its negation flag."""

    raw: str
    negated: bool = False

    def key(self) -> tuple[str, bool]:
        """Dedup identity: trimmed text plus negation."""
        return (normalize_text(self.raw), self.negated)


@dataclass(frozen=True)
class FrameReference:
    """A cross-frame reference: target frame plus the slots used to refer to it.

    ``kind`` is one of ``ref`` (plain reference), ``read`` (copy source), or
    ``write`` (copy target); read/write occur only inside wizard informs.
    """

    target_frame: int
    kind: str = "ref"
    annotation: tuple[tuple[str, Optional[SlotValue]], ...] = ()

    def __post_init__(self):
        if self.target_frame < 1:
            raise ValueError(f"frame ids are positive, got {self.target_frame}")
        if self.kind not in REF_KINDS:
            raise ValueError(f"unknown reference kind {self.kind!r}")


@dataclass(frozen=True)
class DialogueAct:
    """One dialogue act: name, slot args in source order, references, and the
    new-frame id carried by offers and suggestions."""

    name: str
    args: tuple[tuple[str, Optional[SlotValue]], ...] = ()
    refs: tuple[FrameReference, ...] = ()
    new_frame_id: Optional[int] = None

    def without_refs(self) -> "DialogueAct":
        """Copy with refs and new-frame id stripped (tracker input form)."""
        return replace(self, refs=(), new_frame_id=None)

    def valued_args(self) -> list[tuple[str, SlotValue]]:
        return [(k, v) for k, v in self.args if v is not None]


def act(name: str, *args, refs: Iterable[FrameReference] = (), new_frame_id: int | None = None) -> DialogueAct:
    """Convenience constructor: ``act("inform", ("dst_city", "Atlantis"))``.

    Each positional arg is ``key``, ``(key, raw)``, ``(key, raw, negated)``,
    or ``(key, SlotValue)``.
    """
    packed = []
    for a in args:
        if isinstance(a, str):
            packed.append((a, None))
        else:
            key, value = a[0], a[1]
            if value is None or isinstance(value, SlotValue):
                sv = value
            else:
                sv = SlotValue(str(value), bool(a[2]) if len(a) > 2 else False)
            packed.append((key, sv))
    return DialogueAct(name, tuple(packed), tuple(refs), new_frame_id)


@dataclass
class Frame:
    """One tracked hypothesis: constraints plus the user's open questions."""

    frame_id: int
    parent_id: Optional[int] = None
    constraints: dict[str, list[SlotValue]] = field(default_factory=dict)
    requests: list[str] = field(default_factory=list)
    binary_questions: list[tuple[str, SlotValue]] = field(default_factory=list)
    compare_requests: list[tuple[str, frozenset[int]]] = field(default_factory=list)
    rejected: bool = False
    moreinfo: bool = False
    extra: dict = field(default_factory=dict)

    def copy(self) -> "Frame":
        return Frame(
            frame_id=self.frame_id,
            parent_id=self.parent_id,
            constraints={k: list(v) for k, v in self.constraints.items()},
            requests=list(self.requests),
            binary_questions=list(self.binary_questions),
            compare_requests=list(self.compare_requests),
            rejected=self.rejected,
            moreinfo=self.moreinfo,
            extra=dict(self.extra),
        )

    def add_constraint(self, key: str, value: SlotValue) -> None:
        """Append a value; duplicates on (trimmed raw, negated) are dropped."""
        values = self.constraints.setdefault(key, [])
        if value.key() not in {v.key() for v in values}:
            values.append(value)

    def set_constraint(self, key: str, value: SlotValue) -> None:
        """Replace all values of a slot with one value."""
        self.constraints[key] = [value]

    def positive_values(self, key: str) -> list[SlotValue]:
        """Non-negated values currently set for a slot."""
        return [v for v in self.constraints.get(key, []) if not v.negated]

    def current_value(self, key: str) -> Optional[SlotValue]:
        """Most recent non-negated value for a slot, if any."""
        values = self.positive_values(key)
        return values[-1] if values else None

    def has_matching_value(self, key: str, raw: str) -> bool:
        return any(value_matches(v.raw, raw) for v in self.positive_values(key))


@dataclass
class DbCall:
    """One wizard database search: the query plus results and suggestions,
    stored as plain JSON-shaped dicts."""

    query: dict
    results: list = field(default_factory=list)
    suggestions: list = field(default_factory=list)


@dataclass
class Turn:
    author: str
    text: str
    acts: list[DialogueAct] = field(default_factory=list)
    acts_without_refs: list[DialogueAct] = field(default_factory=list)
    active_frame: int = 1
    frames: list[Frame] = field(default_factory=list)
    timestamp: int = 0
    db: Optional[list[DbCall]] = None
    extra: dict = field(default_factory=dict)

    def frame_ids(self) -> list[int]:
        return [f.frame_id for f in self.frames]


@dataclass
class Dialogue:
    id: str
    user_id: str
    wizard_id: str
    turns: list[Turn] = field(default_factory=list)
    user_survey_rating: Optional[int] = None
    wizard_task_successful: Optional[bool] = None
    extra: dict = field(default_factory=dict)

    def user_turns(self) -> list[tuple[int, Turn]]:
        return [(i, t) for i, t in enumerate(self.turns) if t.author == USER]


@dataclass(frozen=True)
class Violation:
    """One invariant breach: rule id, turn index (None for dialogue-level),
    and a human-readable detail."""

    rule: str
    turn: Optional[int]
    detail: str

    def __str__(self) -> str:
        where = f"turn {self.turn}" if self.turn is not None else "dialogue"
        return f"[{self.rule}] {where}: {self.detail}"


def _validate_act(a: DialogueAct, turn_index: int, author: str, out: list[Violation]) -> None:
    if not is_known_act(a.name):
        out.append(Violation("act-name", turn_index, f"unknown act name {a.name!r}"))
    if a.new_frame_id is not None and a.name not in ("offer", "suggest"):
        out.append(Violation("new-frame-id", turn_index, f"act {a.name!r} carries a new frame id"))
    for key, value in a.args:
        if value is not None and not value.raw.strip():
            out.append(Violation("empty-value", turn_index, f"slot {key!r} has an empty value"))
    for ref in a.refs:
        if ref.kind in ("read", "write") and not (author == WIZARD and a.name == "inform"):
            out.append(
                Violation(
                    "read-write-scope",
                    turn_index,
                    f"{ref.kind} reference outside a wizard inform (act {a.name!r}, author {author})",
                )
            )


def validate_dialogue(d: Dialogue) -> list[Violation]:
    """Check every structural invariant; returns an empty list iff the
    dialogue is well formed. Violations are data, not errors."""
    out: list[Violation] = []
    if d.user_survey_rating is not None and not 1 <= d.user_survey_rating <= 5:
        out.append(Violation("rating-range", None, f"user survey rating {d.user_survey_rating} outside 1..5"))
    if d.turns and d.turns[0].author != USER:
        out.append(Violation("first-author", 0, "first turn is not user-authored"))

    previous_ids: set[int] = set()
    for i, turn in enumerate(d.turns):
        if turn.author not in AUTHORS:
            out.append(Violation("author", i, f"unknown author {turn.author!r}"))
        if i > 0 and turn.author == d.turns[i - 1].author:
            out.append(Violation("alternation", i, f"consecutive turns by {turn.author}"))

        ids = turn.frame_ids()
        if ids != sorted(ids) or len(ids) != len(set(ids)):
            out.append(Violation("frame-ids-order", i, f"frame ids not strictly increasing: {ids}"))
        if not previous_ids.issubset(set(ids)):
            missing = sorted(previous_ids - set(ids))
            out.append(Violation("frame-ids-monotone", i, f"frames {missing} vanished from the snapshot"))
        previous_ids = set(ids)

        if turn.active_frame not in previous_ids:
            out.append(Violation("active-frame", i, f"active frame {turn.active_frame} not in snapshot {sorted(previous_ids)}"))

        for f in turn.frames:
            if f.parent_id is not None and not f.parent_id < f.frame_id:
                out.append(Violation("parent-id", i, f"frame {f.frame_id} has parent {f.parent_id} >= its own id"))
            for key, vals in f.constraints.items():
                seen = set()
                for v in vals:
                    if v.key() in seen:
                        out.append(Violation("dup-values", i, f"frame {f.frame_id} slot {key!r} repeats {v.raw!r}"))
                    seen.add(v.key())

        expected = [a.without_refs() for a in turn.acts]
        if list(turn.acts_without_refs) != expected:
            out.append(
                Violation(
                    "acts-without-refs",
                    i,
                    "acts_without_refs is not acts with refs and new-frame ids stripped",
                )
            )

        for a in turn.acts:
            _validate_act(a, i, turn.author, out)
            for ref in a.refs:
                known = set(ids) | ({a.new_frame_id} if a.new_frame_id is not None else set())
                if ref.target_frame not in known:
                    out.append(Violation("ref-target", i, f"reference to frame {ref.target_frame} absent from snapshot"))

        if turn.author == USER and turn.db:
            out.append(Violation("db-author", i, "db searches recorded on a user turn"))

    return out

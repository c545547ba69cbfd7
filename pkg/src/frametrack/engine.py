"""Deterministic replay of gold-labeled acts into per-turn frame snapshots.

The store starts with a single empty frame 1. Replay rules:

* a user inform that changes an already-set slot value branches a new frame
  (one per turn, copying the active frame's constraints with the changed
  slots overwritten) and switches to it;
* wizard offers and suggestions create frames without changing the active
  one, inheriting the constraints of a referenced frame when a ref is given;
* ``switch_frame`` moves the active frame and accepts everything the wizard
  set on the target as constraints; those accepted extras are dropped again
  when the user modifies a constraint or asks for alternatives;
* ``read``/``write`` references inside wizard informs copy values between
  frames (read source -> write target, defaulting to the active frame);
* requests, binary questions, and comparison requests accumulate on the
  active frame; a bare negate after an offer rejects that offer's frame.

Only the user ever changes the active frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import USER, WIZARD, Dialogue, DialogueAct, Frame, SlotValue

# Keys that annotate the wording of a reference; they never become constraints.
_NON_CONSTRAINT_KEYS = frozenset({"ref_anaphora", "impl_anaphora"})


class EngineError(ValueError):
    def __init__(self, message: str, turn: int | None = None):
        super().__init__(message if turn is None else f"turn {turn}: {message}")
        self.turn = turn


@dataclass(frozen=True)
class TraceEvent:
    turn: int
    rule: str
    frame: int

    def __str__(self) -> str:
        return f"turn={self.turn} rule={self.rule} frame={self.frame}"


@dataclass
class FrameStore:
    """Frame history plus the replay context carried between turns."""

    frames: list[Frame] = field(default_factory=list)
    active: int = 1
    next_id: int = 2
    # keys set by the wizard per frame; the droppable subset once accepted
    wizard_keys: dict[int, set[str]] = field(default_factory=dict)
    accepted_keys: dict[int, set[str]] = field(default_factory=dict)
    # context from the last wizard turn
    pending_question: Optional[tuple[str, SlotValue]] = None
    recent_offers: list[int] = field(default_factory=list)
    turn_index: int = 0

    def ids(self) -> list[int]:
        return [f.frame_id for f in self.frames]

    def frame(self, frame_id: int) -> Frame:
        for f in self.frames:
            if f.frame_id == frame_id:
                return f
        raise EngineError(f"reference to unknown frame {frame_id}", self.turn_index)

    def active_frame(self) -> Frame:
        return self.frame(self.active)

    def copy(self) -> "FrameStore":
        return FrameStore(
            frames=[f.copy() for f in self.frames],
            active=self.active,
            next_id=self.next_id,
            wizard_keys={k: set(v) for k, v in self.wizard_keys.items()},
            accepted_keys={k: set(v) for k, v in self.accepted_keys.items()},
            pending_question=self.pending_question,
            recent_offers=list(self.recent_offers),
            turn_index=self.turn_index,
        )


def init_store() -> FrameStore:
    """A fresh store: one empty frame with id 1, active."""
    return FrameStore(frames=[Frame(frame_id=1)], active=1, next_id=2)


def _trace(trace: list[TraceEvent] | None, store: FrameStore, rule: str, frame: int) -> None:
    if trace is not None:
        trace.append(TraceEvent(store.turn_index, rule, frame))


def _constraint_args(a: DialogueAct) -> list[tuple[str, SlotValue]]:
    return [(k, v) for k, v in a.args if v is not None and k not in _NON_CONSTRAINT_KEYS]


def _drop_accepted(store: FrameStore, trace: list[TraceEvent] | None) -> None:
    """Drop wizard-accepted extra constraints from the active frame."""
    extras = store.accepted_keys.get(store.active)
    if not extras:
        return
    frame = store.active_frame()
    for key in sorted(extras):
        frame.constraints.pop(key, None)
        store.wizard_keys.get(store.active, set()).discard(key)
    store.accepted_keys[store.active] = set()
    _trace(trace, store, "drop-accepted", store.active)


def _create_frame(store: FrameStore, parent_id: int | None, constraints: dict[str, list[SlotValue]], requested_id: int | None = None) -> Frame:
    frame_id = store.next_id if requested_id is None else requested_id
    if frame_id < store.next_id:
        raise EngineError(f"new frame id {frame_id} already used (next is {store.next_id})", store.turn_index)
    frame = Frame(frame_id=frame_id, parent_id=parent_id, constraints=constraints)
    store.frames.append(frame)
    store.next_id = frame_id + 1
    return frame


def _apply_user_inform(store: FrameStore, acts: list[DialogueAct], trace) -> None:
    active = store.active_frame()
    all_args = [kv for a in acts for kv in _constraint_args(a)]
    # evaluate changes against the frame state at turn start, so that several
    # values of one slot given in a single turn accumulate instead of branching
    changed = [
        (k, v)
        for k, v in all_args
        if active.positive_values(k) and not active.has_matching_value(k, v.raw)
    ]
    if changed:
        _drop_accepted(store, trace)
        base = {k: list(vs) for k, vs in store.active_frame().constraints.items()}
        for k, _ in changed:
            base.pop(k, None)
        new = _create_frame(store, parent_id=store.active, constraints=base)
        for k, v in all_args:
            new.add_constraint(k, v)
        store.active = new.frame_id
        _trace(trace, store, "user-modify-create", new.frame_id)
    else:
        for k, v in all_args:
            active.add_constraint(k, v)
            store.wizard_keys.get(store.active, set()).discard(k)
            store.accepted_keys.get(store.active, set()).discard(k)
        if all_args:
            _trace(trace, store, "user-inform", store.active)


def _apply_user_act(store: FrameStore, a: DialogueAct, trace) -> None:
    for ref in a.refs:
        if ref.kind in ("read", "write"):
            raise EngineError(f"{ref.kind} reference on a user act", store.turn_index)

    if a.name == "switch_frame":
        if not a.refs:
            raise EngineError("switch_frame without a gold ref", store.turn_index)
        target = store.frame(a.refs[0].target_frame)
        store.active = target.frame_id
        provided = store.wizard_keys.get(target.frame_id)
        if provided:
            store.accepted_keys[target.frame_id] = set(provided)
        _trace(trace, store, "switch-frame", target.frame_id)

    elif a.name == "request_alts":
        _drop_accepted(store, trace)
        _trace(trace, store, "request-alts", store.active)

    elif a.name == "request":
        active = store.active_frame()
        for k, v in a.args:
            if v is None:
                if k not in active.requests:
                    active.requests.append(k)
                _trace(trace, store, "append-request", store.active)
            else:
                active.binary_questions.append((k, v))
                _trace(trace, store, "append-binary", store.active)

    elif a.name == "confirm":
        active = store.active_frame()
        for k, v in a.args:
            if v is None:
                if k not in active.requests:
                    active.requests.append(k)
                _trace(trace, store, "append-request", store.active)
            else:
                active.binary_questions.append((k, v))
                _trace(trace, store, "append-binary", store.active)

    elif a.name == "request_compare":
        active = store.active_frame()
        targets = frozenset(r.target_frame for r in a.refs)
        for k, _ in a.args:
            active.compare_requests.append((k, targets))
            _trace(trace, store, "append-compare", store.active)

    elif a.name == "negate":
        if a.args:
            active = store.active_frame()
            for k, v in a.args:
                if v is not None:
                    active.add_constraint(k, SlotValue(v.raw, negated=True))
                    _trace(trace, store, "negate-value", store.active)
        elif a.refs:
            target = store.frame(a.refs[0].target_frame)
            target.rejected = True
            _trace(trace, store, "negate-reject", target.frame_id)
        elif store.pending_question is not None:
            k, v = store.pending_question
            store.active_frame().add_constraint(k, SlotValue(v.raw, negated=True))
            _trace(trace, store, "negate-question", store.active)
        elif store.recent_offers:
            target = store.frame(store.recent_offers[-1])
            target.rejected = True
            _trace(trace, store, "negate-reject", target.frame_id)

    elif a.name == "moreinfo":
        target_id = a.refs[0].target_frame if a.refs else store.active
        store.frame(target_id).moreinfo = True
        _trace(trace, store, "moreinfo", target_id)

    # greeting / thankyou / goodbye / affirm: no frame effect


def _apply_wizard_act(store: FrameStore, a: DialogueAct, trace) -> None:
    if a.name == "switch_frame":
        raise EngineError("switch_frame authored by the wizard", store.turn_index)

    if a.name in ("offer", "suggest"):
        parent_id = store.active
        constraints: dict[str, list[SlotValue]] = {}
        if a.refs:
            source = store.frame(a.refs[0].target_frame)
            parent_id = source.frame_id
            constraints = {k: list(vs) for k, vs in source.constraints.items()}
        new = _create_frame(store, parent_id, constraints, requested_id=a.new_frame_id)
        for k, v in _constraint_args(a):
            new.set_constraint(k, v)
        store.wizard_keys[new.frame_id] = set(new.constraints)
        store.recent_offers.append(new.frame_id)
        _trace(trace, store, f"wizard-{a.name}-create", new.frame_id)
        return

    if a.name == "inform":
        reads = [r for r in a.refs if r.kind == "read"]
        writes = [r for r in a.refs if r.kind == "write"]
        target = store.frame(writes[0].target_frame) if writes else store.active_frame()
        copied = False
        for read in reads:
            source = store.frame(read.target_frame)
            for k, v in read.annotation:
                value = v if v is not None else source.current_value(k)
                if value is None:
                    continue
                target.add_constraint(k, value)
                store.wizard_keys.setdefault(target.frame_id, set()).add(k)
                copied = True
        for k, v in _constraint_args(a):
            target.add_constraint(k, v)
            store.wizard_keys.setdefault(target.frame_id, set()).add(k)
            copied = True
        if copied:
            rule = "read-write-copy" if (reads or writes) else "wizard-inform"
            _trace(trace, store, rule, target.frame_id)
        return

    if a.name in ("request", "confirm"):
        valued = [(k, v) for k, v in a.args if v is not None]
        if valued:
            store.pending_question = valued[0]
        return

    # no_result / sorry / canthelp / hearmore / you_are_welcome / greeting /
    # thankyou / goodbye / reject / affirm / negate: no frame effect


def apply_turn(
    store: FrameStore,
    author: str,
    acts: Iterable[DialogueAct],
    trace: list[TraceEvent] | None = None,
) -> FrameStore:
    """Apply one turn's gold acts; returns a new store (input untouched)."""
    if author not in (USER, WIZARD):
        raise EngineError(f"unknown author {author!r}")
    store = store.copy()
    acts = list(acts)

    if author == USER:
        informs = [a for a in acts if a.name == "inform"]
        switches = [a for a in acts if a.name == "switch_frame"]
        for a in switches:
            _apply_user_act(store, a, trace)
        if informs:
            for a in informs:
                for ref in a.refs:
                    if ref.kind in ("read", "write"):
                        raise EngineError(f"{ref.kind} reference on a user act", store.turn_index)
            _apply_user_inform(store, informs, trace)
        for a in acts:
            if a.name not in ("inform", "switch_frame"):
                _apply_user_act(store, a, trace)
        store.pending_question = None
        store.recent_offers = []
    else:
        store.pending_question = None
        store.recent_offers = []
        for a in acts:
            _apply_wizard_act(store, a, trace)

    if not acts:
        _trace(trace, store, "noop", store.active)
    store.turn_index += 1
    return store


def replay(dialogue: Dialogue, trace: list[TraceEvent] | None = None) -> list[FrameStore]:
    """Replay a dialogue's gold acts; one store snapshot per turn."""
    store = init_store()
    snapshots = []
    for i, turn in enumerate(dialogue.turns):
        try:
            store = apply_turn(store, turn.author, turn.acts, trace)
        except EngineError as e:
            raise EngineError(f"dialogue {dialogue.id!r}, turn {i}: {e.args[0]}") from e
        snapshots.append(store)
    return snapshots


@dataclass
class ReplayMismatch:
    turn: int
    kind: str
    detail: str


def check_replay(dialogue: Dialogue) -> list[ReplayMismatch]:
    """Compare a replay against the dialogue's stored snapshots."""
    mismatches = []
    for i, (turn, store) in enumerate(zip(dialogue.turns, replay(dialogue))):
        if turn.active_frame != store.active:
            mismatches.append(ReplayMismatch(i, "active", f"stored {turn.active_frame}, replayed {store.active}"))
        stored = {f.frame_id: f for f in turn.frames}
        replayed = {f.frame_id: f for f in store.frames}
        if set(stored) != set(replayed):
            mismatches.append(ReplayMismatch(i, "frame-ids", f"stored {sorted(stored)}, replayed {sorted(replayed)}"))
            continue
        for fid, f in stored.items():
            r = replayed[fid]
            if f.constraints != r.constraints:
                mismatches.append(ReplayMismatch(i, "constraints", f"frame {fid}: stored {f.constraints}, replayed {r.constraints}"))
            if (f.requests, f.binary_questions, f.compare_requests) != (r.requests, r.binary_questions, r.compare_requests):
                mismatches.append(ReplayMismatch(i, "questions", f"frame {fid} question lists differ"))
            if (f.rejected, f.moreinfo) != (r.rejected, r.moreinfo):
                mismatches.append(ReplayMismatch(i, "flags", f"frame {fid}: stored {(f.rejected, f.moreinfo)}, replayed {(r.rejected, r.moreinfo)}"))
    return mismatches

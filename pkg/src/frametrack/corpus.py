"""Corpus file reader and writer.

A corpus file is a JSON document holding a list of dialogue objects with
the released field names: ``turns``, ``labels``, ``user_id``, ``wizard_id``,
``id``; turn fields ``author``, ``text``, ``labels`` (containing
``active_frame``, ``acts``, ``acts_without_refs``), ``timestamp``,
``frames``, ``db``; frame fields ``frame_id``, ``frame_parent_id``,
``requests``, ``binary_questions``, ``compare_requests``, ``info``.

Below those names the encoding is fixed by this package (documented in the
README): act args are ``{"key", "val"}`` objects in source order, with
``ref``/``read``/``write`` args holding reference structures and ``id``
holding the new-frame id; frame ``info`` maps slots to value lists with a
``negated`` flag, plus the ``REJECTED``/``MOREINFO`` booleans. Unknown
extra fields are preserved and written back on save.
"""

from __future__ import annotations

import json
import os
from typing import Any

from .inventory import REF_KINDS
from .model import DbCall, Dialogue, DialogueAct, Frame, FrameReference, SlotValue, Turn, validate_dialogue


class CorpusFormatError(ValueError):
    """Schema violation naming the dialogue, turn, and field concerned."""

    def __init__(self, message: str, dialogue: str | None = None, turn: int | None = None, field: str | None = None):
        where = []
        if dialogue is not None:
            where.append(f"dialogue {dialogue!r}")
        if turn is not None:
            where.append(f"turn {turn}")
        if field is not None:
            where.append(f"field {field!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.dialogue = dialogue
        self.turn = turn
        self.field = field


class CorpusParseError(ValueError):
    """Malformed JSON; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _require(condition: bool, message: str, **where) -> None:
    if not condition:
        raise CorpusFormatError(message, **where)


# ---------------------------------------------------------------------------
# decoding


def _decode_value(obj: Any, where: dict) -> SlotValue:
    _require(isinstance(obj, dict) and isinstance(obj.get("val"), str), "value must be a {val, negated} object", **where)
    negated = obj.get("negated", False)
    _require(isinstance(negated, bool), "negated must be a boolean", **where)
    return SlotValue(obj["val"], negated)


def _decode_ref_items(val: Any, kind: str, where: dict) -> list[FrameReference]:
    _require(isinstance(val, list), f"{kind} arg value must be a list of reference objects", **where)
    refs = []
    for item in val:
        _require(isinstance(item, dict) and isinstance(item.get("frame"), int), "reference needs an integer frame", **where)
        annotation = []
        for kv in item.get("annotations", []):
            _require(isinstance(kv, dict) and isinstance(kv.get("key"), str), "annotation needs a key", **where)
            raw = kv.get("val")
            _require(raw is None or isinstance(raw, str), "annotation val must be text or null", **where)
            annotation.append((kv["key"], SlotValue(raw) if raw is not None else None))
        refs.append(FrameReference(item["frame"], kind, tuple(annotation)))
    return refs


def _decode_act(obj: Any, where: dict) -> DialogueAct:
    _require(isinstance(obj, dict) and isinstance(obj.get("name"), str), "act needs a name", **where)
    args: list[tuple[str, SlotValue | None]] = []
    refs: list[FrameReference] = []
    new_frame_id = None
    for entry in obj.get("args", []):
        _require(isinstance(entry, dict) and isinstance(entry.get("key"), str), "arg needs a key", **where)
        key, val = entry["key"], entry.get("val")
        if key in REF_KINDS:
            refs.extend(_decode_ref_items(val, key, where))
        elif key == "id" and obj["name"] in ("offer", "suggest"):
            _require(isinstance(val, int), "id arg must be an integer", **where)
            new_frame_id = val
        else:
            _require(val is None or isinstance(val, str), f"arg {key!r} val must be text or null", **where)
            negated = entry.get("negated", False)
            _require(isinstance(negated, bool), "negated must be a boolean", **where)
            args.append((key, SlotValue(val, negated) if val is not None else None))
    return DialogueAct(obj["name"], tuple(args), tuple(refs), new_frame_id)


_FRAME_FIELDS = {"frame_id", "frame_parent_id", "requests", "binary_questions", "compare_requests", "info"}


def _decode_frame(obj: Any, where: dict) -> Frame:
    _require(isinstance(obj, dict) and isinstance(obj.get("frame_id"), int), "frame needs an integer frame_id", **where)
    parent = obj.get("frame_parent_id")
    _require(parent is None or isinstance(parent, int), "frame_parent_id must be an integer or null", **where)
    frame = Frame(frame_id=obj["frame_id"], parent_id=parent)
    for entry in obj.get("requests", []):
        _require(isinstance(entry, dict) and isinstance(entry.get("slot"), str), "request needs a slot", **where)
        frame.requests.append(entry["slot"])
    for entry in obj.get("binary_questions", []):
        _require(isinstance(entry, dict) and isinstance(entry.get("slot"), str), "binary question needs a slot", **where)
        frame.binary_questions.append((entry["slot"], _decode_value(entry, where)))
    for entry in obj.get("compare_requests", []):
        _require(isinstance(entry, dict) and isinstance(entry.get("slot"), str), "compare request needs a slot", **where)
        frames = entry.get("frames", [])
        _require(isinstance(frames, list) and all(isinstance(x, int) for x in frames), "compare request frames must be integers", **where)
        frame.compare_requests.append((entry["slot"], frozenset(frames)))
    info = obj.get("info", {})
    _require(isinstance(info, dict), "info must be an object", **where)
    for key, entry in info.items():
        if key == "REJECTED":
            _require(isinstance(entry, bool), "REJECTED must be a boolean", **where)
            frame.rejected = entry
        elif key == "MOREINFO":
            _require(isinstance(entry, bool), "MOREINFO must be a boolean", **where)
            frame.moreinfo = entry
        else:
            _require(isinstance(entry, list), f"info slot {key!r} must hold a list of values", **where)
            frame.constraints[key] = [_decode_value(v, where) for v in entry]
    frame.extra = {k: v for k, v in obj.items() if k not in _FRAME_FIELDS}
    return frame


_TURN_FIELDS = {"author", "text", "labels", "timestamp", "frames", "db"}
_LABEL_FIELDS = {"active_frame", "acts", "acts_without_refs"}


def _decode_turn(obj: Any, index: int, dialogue_id: str) -> Turn:
    where = {"dialogue": dialogue_id, "turn": index}
    _require(isinstance(obj, dict), "turn must be an object", **where)
    _require(isinstance(obj.get("author"), str), "turn needs an author", **where, field="author")
    _require(isinstance(obj.get("text"), str), "turn needs a text", **where, field="text")
    labels = obj.get("labels")
    _require(isinstance(labels, dict), "turn needs a labels object", **where, field="labels")
    _require(isinstance(labels.get("active_frame"), int), "labels need an integer active_frame", **where, field="active_frame")
    _require(isinstance(obj.get("timestamp"), int), "turn needs an integer timestamp", **where, field="timestamp")
    acts = [_decode_act(a, {**where, "field": "acts"}) for a in labels.get("acts", [])]
    acts_wo = [_decode_act(a, {**where, "field": "acts_without_refs"}) for a in labels.get("acts_without_refs", [])]
    frames = [_decode_frame(f, {**where, "field": "frames"}) for f in obj.get("frames", [])]
    db = None
    if obj.get("db") is not None:
        _require(isinstance(obj["db"], list), "db must be a list of searches", **where, field="db")
        db = []
        for call in obj["db"]:
            _require(isinstance(call, dict) and isinstance(call.get("query"), dict), "db entry needs a query object", **where, field="db")
            db.append(DbCall(call["query"], list(call.get("results", [])), list(call.get("suggestions", []))))
    extra = {k: v for k, v in obj.items() if k not in _TURN_FIELDS}
    label_extra = {k: v for k, v in labels.items() if k not in _LABEL_FIELDS}
    if label_extra:
        extra["labels"] = label_extra
    return Turn(
        author=obj["author"],
        text=obj["text"],
        acts=acts,
        acts_without_refs=acts_wo,
        active_frame=labels["active_frame"],
        frames=frames,
        timestamp=obj["timestamp"],
        db=db,
        extra=extra,
    )


_DIALOGUE_FIELDS = {"id", "user_id", "wizard_id", "labels", "turns"}


def _decode_dialogue(obj: Any, index: int) -> Dialogue:
    _require(isinstance(obj, dict), f"corpus entry {index} is not an object")
    _require(isinstance(obj.get("id"), str), f"corpus entry {index} needs a string id")
    did = obj["id"]
    for key in ("user_id", "wizard_id"):
        _require(isinstance(obj.get(key), str), f"needs a string {key}", dialogue=did, field=key)
    labels = obj.get("labels", {})
    _require(isinstance(labels, dict), "labels must be an object", dialogue=did, field="labels")
    rating = labels.get("userSurveyRating")
    _require(rating is None or isinstance(rating, int), "userSurveyRating must be an integer", dialogue=did, field="userSurveyRating")
    success = labels.get("wizardSurveyTaskSuccessful")
    _require(success is None or isinstance(success, bool), "wizardSurveyTaskSuccessful must be a boolean", dialogue=did, field="wizardSurveyTaskSuccessful")
    turns_obj = obj.get("turns", [])
    _require(isinstance(turns_obj, list), "turns must be a list", dialogue=did, field="turns")
    turns = [_decode_turn(t, i, did) for i, t in enumerate(turns_obj)]
    extra = {k: v for k, v in obj.items() if k not in _DIALOGUE_FIELDS}
    label_extra = {k: v for k, v in labels.items() if k not in ("userSurveyRating", "wizardSurveyTaskSuccessful")}
    if label_extra:
        extra["labels"] = label_extra
    return Dialogue(
        id=did,
        user_id=obj["user_id"],
        wizard_id=obj["wizard_id"],
        turns=turns,
        user_survey_rating=rating,
        wizard_task_successful=success,
        extra=extra,
    )


def loads_corpus(text: str) -> list[Dialogue]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorpusParseError(e.msg, e.pos) from e
    if not isinstance(data, list):
        raise CorpusFormatError("corpus document must be a list of dialogues")
    return [_decode_dialogue(obj, i) for i, obj in enumerate(data)]


def load_corpus(path: str | os.PathLike) -> list[Dialogue]:
    """Load a corpus file; every dialogue is decoded strictly (no repair)."""
    with open(path, encoding="utf-8") as fp:
        return loads_corpus(fp.read())


# ---------------------------------------------------------------------------
# encoding


def _encode_value(value: SlotValue, slot: str | None = None) -> dict:
    out: dict[str, Any] = {}
    if slot is not None:
        out["slot"] = slot
    out["val"] = value.raw
    if value.negated:
        out["negated"] = True
    return out


def _encode_act(a: DialogueAct) -> dict:
    args: list[dict] = []
    seen_kinds: list[str] = []
    for ref in a.refs:
        if ref.kind not in seen_kinds:
            seen_kinds.append(ref.kind)
    for kind in seen_kinds:
        items = []
        for ref in a.refs:
            if ref.kind != kind:
                continue
            item: dict[str, Any] = {"frame": ref.target_frame}
            if ref.annotation:
                item["annotations"] = [
                    {"key": k, "val": v.raw if v is not None else None} for k, v in ref.annotation
                ]
            items.append(item)
        args.append({"key": kind, "val": items})
    for key, value in a.args:
        entry: dict[str, Any] = {"key": key, "val": value.raw if value is not None else None}
        if value is not None and value.negated:
            entry["negated"] = True
        args.append(entry)
    if a.new_frame_id is not None:
        args.append({"key": "id", "val": a.new_frame_id})
    return {"name": a.name, "args": args}


def _encode_frame(f: Frame) -> dict:
    info: dict[str, Any] = {}
    for key, values in f.constraints.items():
        info[key] = [_encode_value(v) for v in values]
    if f.rejected:
        info["REJECTED"] = True
    if f.moreinfo:
        info["MOREINFO"] = True
    out = {
        "frame_id": f.frame_id,
        "frame_parent_id": f.parent_id,
        "requests": [{"slot": s} for s in f.requests],
        "binary_questions": [_encode_value(v, slot=s) for s, v in f.binary_questions],
        "compare_requests": [{"slot": s, "frames": sorted(ids)} for s, ids in f.compare_requests],
        "info": info,
    }
    out.update(sorted(f.extra.items()))
    return out


def _encode_turn(t: Turn) -> dict:
    labels: dict[str, Any] = {
        "active_frame": t.active_frame,
        "acts": [_encode_act(a) for a in t.acts],
        "acts_without_refs": [_encode_act(a) for a in t.acts_without_refs],
    }
    extra = dict(t.extra)
    labels.update(sorted(extra.pop("labels", {}).items()))
    out: dict[str, Any] = {
        "author": t.author,
        "text": t.text,
        "labels": labels,
        "timestamp": t.timestamp,
        "frames": [_encode_frame(f) for f in t.frames],
    }
    if t.db is not None:
        out["db"] = [
            {"query": call.query, "results": call.results, "suggestions": call.suggestions}
            for call in t.db
        ]
    out.update(sorted(extra.items()))
    return out


def _encode_dialogue(d: Dialogue) -> dict:
    labels: dict[str, Any] = {}
    if d.user_survey_rating is not None:
        labels["userSurveyRating"] = d.user_survey_rating
    if d.wizard_task_successful is not None:
        labels["wizardSurveyTaskSuccessful"] = d.wizard_task_successful
    extra = dict(d.extra)
    labels.update(sorted(extra.pop("labels", {}).items()))
    out = {
        "id": d.id,
        "user_id": d.user_id,
        "wizard_id": d.wizard_id,
        "labels": labels,
        "turns": [_encode_turn(t) for t in d.turns],
    }
    out.update(sorted(extra.items()))
    return out


def dumps_corpus(dialogues: list[Dialogue]) -> str:
    """Deterministic text encoding: fixed key order, one-space indent."""
    return json.dumps([_encode_dialogue(d) for d in dialogues], ensure_ascii=False, indent=1) + "\n"


def save_corpus(dialogues: list[Dialogue], path: str | os.PathLike, strict: bool = True) -> None:
    """Write a corpus file. With ``strict`` (default), refuses to write
    dialogues that fail validation."""
    if strict:
        for d in dialogues:
            violations = validate_dialogue(d)
            if violations:
                raise CorpusFormatError(
                    f"dialogue fails validation: {violations[0]}", dialogue=d.id, turn=violations[0].turn
                )
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(dumps_corpus(dialogues))

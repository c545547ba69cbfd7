"""Parser and serializer for the compact textual act notation used in
fixtures and human-readable dumps, e.g.::

    offer(ref=[6],seat=business,price=1002.27 USD,id=7)
    inform(breakfast=False, write=[7{name=El Mar}])
    request(breakfast); thankyou

Grammar (normative)::

    acts    := act (";" act)*
    act     := NAME ["(" arglist ")"]
    arglist := arg ("," arg)*
    arg     := reflist | kv | NAME
    reflist := ("ref"|"read"|"write") "=" "[" refitem ("," refitem)* "]"
    refitem := INT ["{" kv ("," kv)* "}"]
    kv      := NAME "=" VALUE

NAME matches ``[a-z_]+``; VALUE is any text up to an unnested ``,``, ``)``
or ``}``, trimmed, so values may contain spaces, periods, slashes, and
currency marks. Unknown slot keys parse fine (classified ``unknown``
downstream); unknown act names are errors.
"""

from __future__ import annotations

import re

from .inventory import ACT_NAMES, REF_KINDS
from .model import DialogueAct, FrameReference, SlotValue

_NAME_RE = re.compile(r"[a-z_]+")
_INT_RE = re.compile(r"\d+")
_OPENERS = {"(": ")", "[": "]", "{": "}"}


class ActSyntaxError(ValueError):
    """Raised on malformed act text; carries the 0-based source column."""

    def __init__(self, message: str, column: int, token: str | None = None):
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.token = token


class _Scanner:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.source) and self.source[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.source[self.pos] if self.pos < len(self.source) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            raise ActSyntaxError(f"expected {char!r}, found {self.peek()!r}", self.pos)
        self.pos += 1

    def name(self, what: str) -> str:
        self.skip_ws()
        m = _NAME_RE.match(self.source, self.pos)
        if not m:
            raise ActSyntaxError(f"expected {what}", self.pos)
        self.pos = m.end()
        return m.group()

    def integer(self, what: str) -> int:
        self.skip_ws()
        m = _INT_RE.match(self.source, self.pos)
        if not m:
            raise ActSyntaxError(f"expected {what}", self.pos)
        self.pos = m.end()
        return int(m.group())

    def value(self) -> str:
        """Scan a value: everything up to an unnested ',', ')', or '}'."""
        self.skip_ws()
        start = self.pos
        depth: list[str] = []
        while self.pos < len(self.source):
            c = self.source[self.pos]
            if c in _OPENERS:
                depth.append(_OPENERS[c])
            elif depth and c == depth[-1]:
                depth.pop()
            elif not depth and c in ",)}":
                break
            self.pos += 1
        if depth:
            raise ActSyntaxError(f"unclosed {depth[-1]!r} in value", start)
        return self.source[start : self.pos].strip()


def _parse_refitems(sc: _Scanner, kind: str) -> list[FrameReference]:
    sc.skip_ws()
    sc.expect("[")
    items: list[FrameReference] = []
    while True:
        target = sc.integer("frame id")
        annotation: list[tuple[str, SlotValue | None]] = []
        sc.skip_ws()
        if sc.peek() == "{":
            sc.expect("{")
            while True:
                key = sc.name("slot key")
                sc.skip_ws()
                value = None
                if sc.peek() == "=":
                    sc.expect("=")
                    raw = sc.value()
                    if raw:
                        value = SlotValue(raw)
                annotation.append((key, value))
                sc.skip_ws()
                if sc.peek() == ",":
                    sc.expect(",")
                    continue
                sc.expect("}")
                break
        if target < 1:
            raise ActSyntaxError("frame ids start at 1", sc.pos, str(target))
        items.append(FrameReference(target, kind, tuple(annotation)))
        sc.skip_ws()
        if sc.peek() == ",":
            sc.expect(",")
            continue
        sc.expect("]")
        return items


def _parse_act(sc: _Scanner) -> DialogueAct:
    start = sc.pos
    name = sc.name("act name")
    if name not in ACT_NAMES:
        raise ActSyntaxError(f"unknown act name {name!r}", start, name)
    args: list[tuple[str, SlotValue | None]] = []
    refs: list[FrameReference] = []
    new_frame_id: int | None = None
    sc.skip_ws()
    if sc.peek() == "(":
        sc.expect("(")
        sc.skip_ws()
        if sc.peek() == ")":
            raise ActSyntaxError("empty argument list", sc.pos)
        while True:
            key = sc.name("slot key")
            sc.skip_ws()
            if sc.peek() == "=":
                sc.expect("=")
                sc.skip_ws()
                if key in REF_KINDS and sc.peek() == "[":
                    refs.extend(_parse_refitems(sc, key))
                elif key == "id" and name in ("offer", "suggest"):
                    new_frame_id = sc.integer("frame id")
                else:
                    raw = sc.value()
                    args.append((key, SlotValue(raw) if raw else None))
            else:
                args.append((key, None))
            sc.skip_ws()
            if sc.peek() == ",":
                sc.expect(",")
                continue
            sc.expect(")")
            break
    return DialogueAct(name, tuple(args), tuple(refs), new_frame_id)


def parse_acts(source: str) -> list[DialogueAct]:
    """Parse a line of ``;``-separated act expressions."""
    sc = _Scanner(source)
    acts: list[DialogueAct] = []
    sc.skip_ws()
    if sc.pos == len(source):
        return acts
    while True:
        acts.append(_parse_act(sc))
        sc.skip_ws()
        if sc.peek() == ";":
            sc.expect(";")
            sc.skip_ws()
            continue
        if sc.pos != len(source):
            raise ActSyntaxError(f"trailing input {source[sc.pos:]!r}", sc.pos)
        return acts


def _render_ref_group(kind: str, items: list[FrameReference]) -> str:
    parts = []
    for ref in items:
        body = str(ref.target_frame)
        if ref.annotation:
            kvs = ", ".join(k if v is None else f"{k}={v.raw}" for k, v in ref.annotation)
            body += "{" + kvs + "}"
        parts.append(body)
    return f"{kind}=[" + ", ".join(parts) + "]"


def render_act(a: DialogueAct) -> str:
    """Canonical text for one act: reference groups first (in first-occurrence
    order), then plain args in source order, then the new-frame id."""
    pieces: list[str] = []
    seen_kinds: list[str] = []
    for ref in a.refs:
        if ref.kind not in seen_kinds:
            seen_kinds.append(ref.kind)
    for kind in seen_kinds:
        pieces.append(_render_ref_group(kind, [r for r in a.refs if r.kind == kind]))
    for key, value in a.args:
        pieces.append(key if value is None else f"{key}={value.raw}")
    if a.new_frame_id is not None:
        pieces.append(f"id={a.new_frame_id}")
    if not pieces:
        return a.name
    return f"{a.name}(" + ", ".join(pieces) + ")"


def render_acts(acts: list[DialogueAct]) -> str:
    """Canonical text for a list of acts; inverse of :func:`parse_acts` on
    canonical input."""
    return "; ".join(render_act(a) for a in acts)

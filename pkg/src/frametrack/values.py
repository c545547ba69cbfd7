"""Slot-value normalization and the matching predicate shared by the
replay engine, the trackers, and the IOB span finder.

Matching is deliberately shallow: case, whitespace, currency decoration,
and number formatting are normalized, but no synonym resolution is done
("NYC" never matches "New York").
"""

from __future__ import annotations

import re

_WS_RE = re.compile(r"\s+")
_CURRENCY_WORDS = {"usd", "cad", "eur", "gbp", "dollar", "dollars", "$"}
_NUMERIC_RE = re.compile(r"[+-]?\d{1,3}(?:,\d{3})*(?:\.\d+)?|[+-]?\d+(?:\.\d+)?")


def normalize_text(text: str) -> str:
    """Trim and collapse internal whitespace; nothing else."""
    return _WS_RE.sub(" ", text.strip())


def normalize_value(text: str) -> str:
    """Canonical form used for value comparison.

    Lowercases, collapses whitespace, drops currency markers, and
    canonicalizes numbers (strips thousands separators, "1,700.00" -> "1700").
    """
    s = normalize_text(text).casefold()
    tokens = [t for t in s.replace("$", " $ ").split() if t not in _CURRENCY_WORDS]
    s = " ".join(tokens)
    if _NUMERIC_RE.fullmatch(s):
        number = float(s.replace(",", ""))
        if number == int(number):
            return str(int(number))
        return repr(number)
    return s


def value_matches(a: str, b: str) -> bool:
    """True when two raw value texts denote the same value after normalization."""
    return normalize_value(a) == normalize_value(b)

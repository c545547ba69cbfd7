"""Closed inventories of dialogue acts and slot keys.

Every act name and slot key occurring in a corpus is classified against
these tables; anything outside them is reported as ``unknown`` rather than
silently accepted.
"""

from __future__ import annotations

# Act name -> allowed authors.
ACTS: dict[str, frozenset[str]] = {
    "inform": frozenset({"user", "wizard"}),
    "offer": frozenset({"wizard"}),
    "request": frozenset({"user", "wizard"}),
    "switch_frame": frozenset({"user"}),
    "suggest": frozenset({"wizard"}),
    "no_result": frozenset({"wizard"}),
    "thankyou": frozenset({"user", "wizard"}),
    "sorry": frozenset({"wizard"}),
    "greeting": frozenset({"user", "wizard"}),
    "affirm": frozenset({"user", "wizard"}),
    "negate": frozenset({"user", "wizard"}),
    "confirm": frozenset({"user", "wizard"}),
    "moreinfo": frozenset({"user"}),
    "goodbye": frozenset({"user", "wizard"}),
    "request_alts": frozenset({"user"}),
    "request_compare": frozenset({"user"}),
    "hearmore": frozenset({"wizard"}),
    "you_are_welcome": frozenset({"wizard"}),
    "canthelp": frozenset({"wizard"}),
    "reject": frozenset({"wizard"}),
}

ACT_NAMES = frozenset(ACTS)

# Slot kinds.
KIND_SEARCHABLE = "searchable"
KIND_DISPLAYED = "displayed"
KIND_META = "meta"
KIND_UNKNOWN = "unknown"

# Fields the wizard's database search accepts.
SEARCHABLE_SLOTS = frozenset(
    {
        "budget",       # maximum price
        "price_min",
        "dst_city",
        "max_duration",
        "n_adults",
        "n_children",
        "start_date",
        "end_date",
        "flex",         # dates flexible: widens the window by 2 days each side
        "or_city",
    }
)

AMENITY_SLOTS = frozenset({"breakfast", "parking", "wifi", "gym", "spa"})

VICINITY_SLOTS = frozenset(
    {
        "park",
        "museum",
        "beach",
        "shopping",
        "market",
        "airport",
        "university",
        "mall",
        "cathedral",
        "downtown",
        "palace",
        "theatre",
    }
)

FLIGHT_SLOTS = frozenset(
    {
        "seat",
        "departure_date_dep",
        "departure_date_arr",
        "departure_time_dep",
        "arrival_time_dep",
        "departure_time_arr",
        "arrival_time_arr",
        "duration_dep",
        "duration_arr",
    }
)

# Package fields shown to the wizard but not searchable.
DISPLAYED_SLOTS = (
    frozenset(
        {
            "price",
            "duration",
            "name",
            "country",
            "city",
            "category",
            "gst_rating",
        }
    )
    | AMENITY_SLOTS
    | VICINITY_SLOTS
    | FLIGHT_SLOTS
)

# Slot keys that describe the dialogue itself, not the database.
META_SLOTS = frozenset(
    {
        "count",
        "count_amenities",
        "count_name",
        "count_dst_city",
        "count_seat",
        "count_category",
        "id",
        "vicinity",
        "amenities",
        "ref_anaphora",
        "impl_anaphora",
        "ref",
        "read",
        "write",
        "intent",
        "action",
    }
)

KNOWN_SLOTS = SEARCHABLE_SLOTS | DISPLAYED_SLOTS | META_SLOTS

# Structural keys handled by the parser, never stored as plain args.
STRUCTURAL_SLOTS = frozenset({"ref", "read", "write", "id"})

REF_KINDS = ("ref", "read", "write")

# Acts that carry no reference semantics for the tracking task.
NON_REF_ACTS = frozenset({"greeting", "thankyou", "goodbye", "sorry", "you_are_welcome"})


def classify_slot(key: str) -> str:
    """Return the kind of a slot key: searchable, displayed, meta, or unknown."""
    if key in SEARCHABLE_SLOTS:
        return KIND_SEARCHABLE
    if key in DISPLAYED_SLOTS:
        return KIND_DISPLAYED
    if key in META_SLOTS:
        return KIND_META
    return KIND_UNKNOWN


def is_known_act(name: str) -> bool:
    return name in ACT_NAMES


def is_ref_capable(name: str) -> bool:
    """Whether an act of this name may carry a frame reference."""
    return name in ACT_NAMES and name not in NON_REF_ACTS

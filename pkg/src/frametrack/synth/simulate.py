"""Scripted user/wizard simulator emitting fully annotated dialogues.

Turns are generated act-first and pushed through the replay engine as they
are produced, so the stored per-turn frame snapshots replay exactly by
construction. Utterance texts are templated with every slot value embedded
verbatim, which keeps the derived IOB corpus learnable. The user policy
exercises frame switches, constraint modification (frame creation),
comparison requests, read/write informs, negations, and suggestion uptake,
with probabilities taken from :class:`SimulatorConfig`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, fields, replace
from datetime import timedelta

from ..engine import apply_turn, init_store
from ..model import Dialogue, DialogueAct, FrameReference, SlotValue, Turn, USER, WIZARD, act
from .database import Package, SearchQuery, search, suggest
from .tasks import DEFAULT_TEMPLATES, GeneratedTask, instantiate_tasks


@dataclass
class SimulatorConfig:
    p_second_offer: float = 0.75
    p_hearmore: float = 0.2
    p_switch: float = 0.85
    p_request: float = 0.5
    p_binary: float = 0.35
    p_compare: float = 0.5
    p_negate_offer: float = 0.15
    p_negate_value: float = 0.12
    p_moreinfo: float = 0.25
    p_modify: float = 0.75
    p_retry_on_empty: float = 0.75
    p_request_alts: float = 0.18
    p_readwrite: float = 0.55
    p_suggest_display: float = 0.75
    p_unanswerable: float = 0.1
    p_book: float = 0.35
    max_user_moves: int = 11
    task_success_rate: float = 0.8
    n_users: int = 10
    n_wizards: int = 3

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            for f in fields(self):
                fp.write(f"{f.name}={getattr(self, f.name)}\n")

    @classmethod
    def load(cls, path) -> "SimulatorConfig":
        kwargs = {}
        with open(path, encoding="utf-8") as fp:
            for line in fp:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, value = line.split("=", 1)
                kind = {f.name: f.type for f in fields(cls)}[key]
                kwargs[key] = int(value) if kind == "int" else float(value)
        return cls(**kwargs)


class SimulationError(RuntimeError):
    """Policy deadlock; carries the transcript so far."""

    def __init__(self, message: str, transcript: list[str]):
        super().__init__(message + "\n" + "\n".join(transcript))
        self.transcript = transcript


# Opening fragments are joined into one sentence. Words standing between two
# slot values land inside the act span, so every interior word here must stay
# exclusive to user informs; the other acts use single-value spans.
_SLOT_PHRASES = {
    "dst_city": "I need a getaway to {v}",
    "or_city": "from {v}",
    "start_date": "starting {v}",
    "end_date": "ending {v}",
    "n_adults": "for {v} adults",
    "n_children": "bringing {v} kids",
    "max_duration": "max {v} days",
    "budget": "within {v}",
    "flex": "and the dates can shift",
}

_SLOT_ORDER = (
    "dst_city",
    "or_city",
    "start_date",
    "end_date",
    "n_adults",
    "n_children",
    "max_duration",
    "budget",
    "flex",
)

_MODIFY_PHRASES = {
    "budget": "Actually raise the budget to {v} .",
    "dst_city": "Let us try {v} instead .",
    "n_adults": "Make us a party of {v} .",
    "start_date": "Could we leave on {v} instead ?",
    "seat": "Could we fly {v} instead ?",
    "category": "Could we aim category {v} instead ?",
    "price": "Can you find something around {v} ?",
}

_REQUEST_PHRASES = {
    "price": "What would we pay in total ?",
    "gst_rating": "How do guests score it ?",
    "breakfast": "Does breakfast come included ?",
    "wifi": "Is there wifi ?",
    "parking": "Do they have parking ?",
    "category": "Which category does it fall in ?",
}


def _fmt_price(value: float) -> str:
    return f"{value:.2f}"


def _fmt_category(value: float) -> str:
    # one decimal always ("3.0", "2.5") so star levels never look like counts
    return f"{value:.1f}"


class _Simulation:
    def __init__(self, task: GeneratedTask, db: list[Package], rng: random.Random, config: SimulatorConfig):
        self.task = task
        self.db = db
        self.rng = rng
        self.config = config
        self.store = init_store()
        self.turns: list[Turn] = []
        self.timestamp = 1_470_000_000_000 + rng.randint(0, 1_000_000)
        self.informed: dict[str, str] = {}
        self.offer_packages: dict[int, Package] = {}
        self.offered_keys: set[tuple] = set()
        self.booked = False

    # -- plumbing -----------------------------------------------------------

    def emit(self, author: str, acts: list[DialogueAct], text: str, db_calls=None) -> None:
        expected = USER if len(self.turns) % 2 == 0 else WIZARD
        if author != expected:
            raise SimulationError(f"turn order broken: expected {expected}", [t.text for t in self.turns])
        new_store = apply_turn(self.store, author, acts)
        if author == USER and new_store.next_id > self.store.next_id:
            created = new_store.next_id - 1
            acts = [
                replace(a, refs=a.refs + (FrameReference(created),)) if a.name == "inform" and not a.refs else a
                for a in acts
            ]
        self.store = new_store
        self.timestamp += self.rng.randint(5_000, 90_000)
        self.turns.append(
            Turn(
                author=author,
                text=text,
                acts=list(acts),
                acts_without_refs=[a.without_refs() for a in acts],
                active_frame=self.store.active,
                frames=[f.copy() for f in self.store.frames],
                timestamp=self.timestamp,
                db=db_calls,
            )
        )

    def _query(self) -> SearchQuery:
        kwargs: dict = {}
        conv = {
            "budget": ("price_max", float),
            "dst_city": ("dst_city", str),
            "or_city": ("or_city", str),
            "n_adults": ("n_adults", int),
            "n_children": ("n_children", int),
            "max_duration": ("max_duration", int),
        }
        for slot, (field_name, cast) in conv.items():
            if slot in self.informed:
                kwargs[field_name] = cast(self.informed[slot].lstrip("$"))
        for slot in ("start_date", "end_date"):
            if slot in self.informed:
                from datetime import date

                kwargs[slot] = date.fromisoformat(self.informed[slot])
        if self.informed.get("flex") == "True":
            kwargs["flex"] = True
        return SearchQuery(**kwargs)

    def active_package(self) -> Package | None:
        return self.offer_packages.get(self.store.active)

    # -- user side ----------------------------------------------------------

    def _constraint_waves(self) -> list[dict[str, str]]:
        raw = self.task.query.to_dict()
        slots: dict[str, str] = {}
        rename = {"price_max": "budget"}
        for key, value in raw.items():
            slot = rename.get(key, key)
            if slot == "price_min":
                continue
            if isinstance(value, float) and value == int(value):
                value = int(value)
            slots[slot] = f"${value}" if slot == "budget" else str(value)
        ordered = {k: slots[k] for k in _SLOT_ORDER if k in slots}
        head_keys = [k for k in ordered if k in ("dst_city", "or_city", "start_date", "end_date")]
        tail_keys = [k for k in ordered if k not in head_keys]
        if head_keys and tail_keys:
            return [{k: ordered[k] for k in head_keys}, {k: ordered[k] for k in tail_keys}]
        return [ordered]

    def user_informs(self, slots: dict[str, str], opening: bool = False) -> None:
        self.informed.update(slots)
        args = [(k, v) for k, v in slots.items()]
        acts = []
        pieces = []
        if opening:
            acts.append(act("greeting"))
            pieces.append(self.rng.choice(("Hello !", "Hi there !", "Good morning !")))
        else:
            pieces.append("Also")
        acts.append(act("inform", *args))
        pieces.extend(_SLOT_PHRASES[k].format(v=v) for k, v in slots.items())
        self.emit(USER, acts, " ".join(pieces) + " .")

    def user_modify(self) -> bool:
        """Change the value of a slot set in the active frame; creates a frame."""
        active = self.store.active_frame()
        options = []
        for slot in ("budget", "n_adults", "start_date", "seat", "price", "dst_city"):
            current = active.current_value(slot)
            if current is None:
                continue
            new = self._modified_value(slot, current.raw)
            if new is not None:
                options.append((slot, new))
        if not options:
            return False
        slot, new = options[0] if len(options) == 1 else self.rng.choice(options)
        if slot in self.informed or slot in ("budget", "dst_city", "n_adults", "start_date"):
            self.informed[slot] = new
        self.emit(USER, [act("inform", (slot, new))], _MODIFY_PHRASES[slot].format(v=new))
        return True

    def _modified_value(self, slot: str, current: str) -> str | None:
        rng = self.rng
        if slot == "budget":
            try:
                return f"${int(float(current.lstrip('$'))) + rng.choice((200, 300, 500))}"
            except ValueError:
                return None
        if slot == "price":
            try:
                return f"{int(float(current)) + rng.choice((-300, -200, 200)):d}.00"
            except ValueError:
                return None
        if slot == "n_adults":
            n = int(current)
            return str(n + 1 if n < 8 else n - 1)
        if slot == "start_date":
            from datetime import date

            try:
                return (date.fromisoformat(current) + timedelta(days=rng.randint(3, 10))).isoformat()
            except ValueError:
                return None
        if slot == "seat":
            return "economy" if current == "business" else "business"
        if slot == "category":
            try:
                value = float(current)
            except ValueError:
                return None
            return _fmt_category(value - 0.5 if value > 1.0 else value + 0.5)
        if slot == "dst_city":
            others = sorted({p.dst_city for p in self.db if p.dst_city != current})
            return rng.choice(others) if others else None
        return None

    # -- wizard side --------------------------------------------------------

    def wizard_search_and_offer(self, prefix_acts: list[DialogueAct] | None = None, prefix_text: str = "") -> str:
        """Search with the user's constraints; offer, or report no result and
        maybe suggest. Returns the outcome kind."""
        prefix = list(prefix_acts or [])
        q = self._query()
        results = search(self.db, q)
        fresh = [p for p in results if self._offer_key(p) not in self.offered_keys]
        if fresh:
            return self._offer(q, results, fresh, prefix, prefix_text)
        if results:
            # everything matching was already offered
            self.emit(
                WIZARD,
                prefix + [act("canthelp")],
                (prefix_text + " " if prefix_text else "") + "I am afraid I have already shown you everything matching .",
            )
            return "exhausted"
        return self._no_result(q, prefix, prefix_text)

    @staticmethod
    def _offer_key(p: Package) -> tuple:
        return (p.hotel.name, p.price, p.flight.seat, p.flight.departure_date_dep)

    def _offer_args(self, p: Package) -> list:
        return [
            ("name", p.hotel.name),
            ("category", _fmt_category(p.hotel.category)),
            ("gst_rating", f"{p.hotel.gst_rating}/10"),
            ("price", _fmt_price(p.price)),
        ]

    def _offer(
        self,
        q: SearchQuery,
        results: list[Package],
        fresh: list[Package],
        prefix_acts: list[DialogueAct] | None = None,
        prefix_text: str = "",
    ) -> str:
        first = fresh[0]
        id1 = self.store.next_id
        acts = list(prefix_acts or []) + [act("offer", *self._offer_args(first), new_frame_id=id1)]
        pieces = ([prefix_text] if prefix_text else []) + [
            f"I can offer the {first.hotel.name} rated {first.hotel.gst_rating}/10 "
            f"holding {_fmt_category(first.hotel.category)} stars at {_fmt_price(first.price)} ."
        ]
        self.offer_packages[id1] = first
        self.offered_keys.add(self._offer_key(first))
        sibling = next(
            (
                p
                for p in results
                if p.hotel.name == first.hotel.name
                and p.flight.seat != first.flight.seat
                and self._offer_key(p) not in self.offered_keys
            ),
            None,
        )
        if self.rng.random() < self.config.p_second_offer:
            if sibling is not None:
                id2 = id1 + 1
                acts.append(
                    act(
                        "offer",
                        ("seat", sibling.flight.seat),
                        ("price", _fmt_price(sibling.price)),
                        refs=[FrameReference(id1)],
                        new_frame_id=id2,
                    )
                )
                pieces.append(f"The same stay flying {sibling.flight.seat} comes at {_fmt_price(sibling.price)} .")
                self.offer_packages[id2] = sibling
                self.offered_keys.add(self._offer_key(sibling))
            else:
                second = next((p for p in fresh[1:] if p.hotel.name != first.hotel.name), None)
                if second is not None:
                    id2 = id1 + 1
                    acts.append(act("offer", *self._offer_args(second), new_frame_id=id2))
                    pieces.append(
                        f"Your other pick is the {second.hotel.name} rated {second.hotel.gst_rating}/10 "
                        f"holding {_fmt_category(second.hotel.category)} stars at {_fmt_price(second.price)} ."
                    )
                    self.offer_packages[id2] = second
                    self.offered_keys.add(self._offer_key(second))
        if self.rng.random() < self.config.p_hearmore:
            acts.append(act("hearmore"))
            pieces.append("Would you like to hear more about it ?")
        db_calls = [self._db_call(q, results)]
        self.emit(WIZARD, acts, " ".join(pieces), db_calls=db_calls)
        return "offered"

    def _no_result(self, q: SearchQuery, prefix_acts: list[DialogueAct] | None = None, prefix_text: str = "") -> str:
        suggestion = suggest(self.db, q)
        show = suggestion.packages and self.rng.random() < self.config.p_suggest_display
        acts = list(prefix_acts or []) + [act("no_result")]
        pieces = ([prefix_text] if prefix_text else []) + [
            "I am sorry , nothing in our database matches those constraints ."
        ]
        if show:
            p = suggestion.packages[0]
            fid = self.store.next_id
            acts.append(act("suggest", ("name", p.hotel.name), ("price", _fmt_price(p.price)), new_frame_id=fid))
            pieces.append(
                f"Bending the limits unlocks the {p.hotel.name} near {_fmt_price(p.price)} ."
            )
            self.offer_packages[fid] = p
            self.offered_keys.add(self._offer_key(p))
        db_calls = [self._db_call(q, [], suggestion.packages if show else [])]
        self.emit(WIZARD, acts, " ".join(pieces), db_calls=db_calls)
        return "suggested" if show else "empty"

    def _db_call(self, q: SearchQuery, results: list[Package], suggestions: list[Package] | None = None):
        from ..model import DbCall

        return DbCall(
            query=q.to_dict(),
            results=[p.to_dict() for p in results],
            suggestions=[p.to_dict() for p in (suggestions or [])],
        )

    def _other_answer(self, p: Package, slot: str) -> tuple[str, str]:
        if slot == "price":
            return _fmt_price(p.price), f"The other pick reads {_fmt_price(p.price)} ."
        has = slot in p.hotel.amenities
        if has:
            return "True", f"The other pick does include {slot} ."
        return "False", f"The other pick does not include {slot} ."

    def _write_inform(self, target: int, slot: str) -> tuple[DialogueAct, str]:
        pkg = self.offer_packages[target]
        value, text = self._other_answer(pkg, slot)
        annotation = (("name", SlotValue(pkg.hotel.name)),)
        return act("inform", (slot, value), refs=[FrameReference(target, "write", annotation)]), text

    def wizard_answer_request(self, slot: str) -> None:
        p = self.active_package()
        acts: list[DialogueAct] = []
        pieces: list[str] = []
        if p is None:
            offers = sorted(self.offer_packages)
            if not offers:
                acts.append(act("canthelp"))
                pieces.append("I would need to find you a package before that .")
                self.emit(WIZARD, acts, " ".join(pieces))
                return
            # answer for the latest offer, writing the value into its frame
            inform, text = self._write_inform(offers[-1], slot)
            self.emit(WIZARD, [inform], text)
            return
        value, text = self._package_answer(p, slot)
        acts.append(act("inform", (slot, value)))
        pieces.append(text)
        # sometimes also record the same detail for another offer via write
        others = [fid for fid in self.offer_packages if fid != self.store.active]
        if others and self.rng.random() < self.config.p_readwrite:
            inform, other_text = self._write_inform(self.rng.choice(sorted(others)), slot)
            acts.append(inform)
            pieces.append(other_text)
        self.emit(WIZARD, acts, " ".join(pieces))

    def _package_answer(self, p: Package, slot: str) -> tuple[str, str]:
        if slot == "price":
            return _fmt_price(p.price), f"Its price tag reads {_fmt_price(p.price)} ."
        if slot == "gst_rating":
            return f"{p.hotel.gst_rating}/10", f"Guests score it {p.hotel.gst_rating}/10 ."
        if slot == "category":
            return _fmt_category(p.hotel.category), f"It carries {_fmt_category(p.hotel.category)} ."
        if slot in ("breakfast", "wifi", "parking"):
            has = slot in p.hotel.amenities
            if has:
                return "True", f"Yes , {slot} is included ."
            return "False", f"No , there is no {slot} ."
        raise SimulationError(f"no answer template for slot {slot}", [t.text for t in self.turns])

    def wizard_answer_compare(self, slot: str, frame_ids: list[int]) -> None:
        acts = []
        pieces = []
        ordinals = ("first", "second", "third")
        for ordinal, fid in zip(ordinals, frame_ids):
            p = self.offer_packages[fid]
            value = _fmt_price(p.price) if slot == "price" else str(getattr(p, slot, p.price))
            annotation = (("ref_anaphora", SlotValue(ordinal)), (slot, SlotValue(value)))
            acts.append(act("inform", refs=[FrameReference(fid, "read", annotation)]))
            pieces.append(f"The {ordinal} option costs {value} .")
        self.emit(WIZARD, acts, " ".join(pieces))

    # -- the script ---------------------------------------------------------

    def run(self) -> None:
        waves = self._constraint_waves()
        self.user_informs(waves[0], opening=True)
        if len(waves) > 1:
            missing = next(iter(waves[1]))
            pretty = {
                "dst_city": "destination",
                "or_city": "departure city",
                "start_date": "departure date",
                "end_date": "return date",
                "n_adults": "party size",
                "n_children": "children count",
                "max_duration": "trip length",
                "budget": "spending limit",
                "flex": "flexibility",
            }[missing]
            self.emit(
                WIZARD,
                [act("greeting"), act("request", missing)],
                f"Hello ! Happy to help . What is your {pretty} ?",
            )
            self.user_informs(waves[1])

        outcome = self.wizard_search_and_offer()
        moves = 0
        gave_up = False
        while moves < self.config.max_user_moves and not self.booked and not gave_up:
            moves += 1
            outcome, gave_up = self._user_move(outcome)
        if not self.booked and not gave_up:
            # ran out of patience
            self.emit(USER, [act("thankyou"), act("goodbye")], "Thanks anyway , goodbye !")
            self.emit(WIZARD, [act("goodbye")], "Goodbye !")

    def _user_move(self, outcome: str) -> tuple[str, bool]:
        rng = self.rng
        cfg = self.config

        if outcome in ("empty", "exhausted"):
            if rng.random() < cfg.p_retry_on_empty and self.user_modify():
                return self.wizard_search_and_offer(), False
            self.emit(USER, [act("thankyou"), act("goodbye")], "Too bad . Thank you , goodbye !")
            self.emit(WIZARD, [act("you_are_welcome"), act("goodbye")], "You are welcome ! Goodbye !")
            return outcome, True

        offers = sorted(self.offer_packages)
        unrejected = [fid for fid in offers if not self.store.frame(fid).rejected]

        # occasionally rule out an option outright
        if unrejected and rng.random() < cfg.p_negate_offer:
            target = unrejected[-1]
            self.emit(USER, [act("negate", refs=[FrameReference(target)])], "No , that one will not suit us .")
            self.offer_packages.pop(target, None)
            return self.wizard_search_and_offer([act("sorry")], "Sorry about that , let me keep looking ."), False

        if len(unrejected) >= 2 and rng.random() < cfg.p_compare:
            pair = unrejected[-2:]
            self.emit(
                USER,
                [act("request_compare", "price", refs=[FrameReference(f) for f in pair])],
                "Which of those two is cheaper ?",
            )
            self.wizard_answer_compare("price", pair)
            return "offered", False

        if unrejected and self.store.active not in self.offer_packages and rng.random() < cfg.p_switch:
            target = unrejected[0] if rng.random() < 0.5 else unrejected[-1]
            name = self.offer_packages[target].hotel.name.lower()
            self.emit(
                USER,
                [act("switch_frame", ("name", name), refs=[FrameReference(target, "ref", (("name", SlotValue(name)),))])],
                f"Let us take the {name} choice .",
            )
            if rng.random() < cfg.p_moreinfo:
                self.emit(WIZARD, [act("hearmore")], "Would you like more detail on it ?")
                self.emit(USER, [act("affirm"), act("moreinfo")], "Yes please , tell me more .")
                p = self.active_package()
                self.emit(
                    WIZARD,
                    [act("inform", ("country", p.hotel.country))],
                    f"It sits over in {p.hotel.country} .",
                )
            else:
                self.emit(WIZARD, [act("affirm")], "Good choice !")
            return "switched", False

        if rng.random() < cfg.p_request:
            p = self.active_package()
            if p is not None and rng.random() < cfg.p_unanswerable:
                self.emit(USER, [], "Could you check whether the pool has a view of the sea ?")
                self.emit(WIZARD, [act("sorry"), act("canthelp")], "I am sorry , I cannot provide this information .")
                return "offered", False
            if "budget" in self.informed and rng.random() < cfg.p_binary:
                value = self.informed["budget"]
                self.emit(
                    USER,
                    [act("confirm", ("budget", value), refs=[FrameReference(self.store.active, "ref", (("budget", SlotValue(value)),))])],
                    f"Just to check , we stay under {value} , right ?",
                )
                self.emit(WIZARD, [act("affirm")], "Yes , exactly .")
            else:
                slot = rng.choice(("price", "breakfast", "wifi", "parking"))
                self.emit(
                    USER,
                    [act("request", slot, refs=[FrameReference(self.store.active)])],
                    _REQUEST_PHRASES[slot],
                )
                self.wizard_answer_request(slot)
            return "offered", False

        if rng.random() < cfg.p_negate_value and "duration" not in self.informed:
            days = rng.randint(2, 5)
            self.emit(USER, [act("negate", ("duration", str(days)))], f"I would hate staying {days} nights .")
            self.emit(WIZARD, [act("affirm")], "Understood , I will keep that in mind .")
            return "offered", False

        if self.store.active in self.offer_packages and rng.random() < cfg.p_book:
            self.emit(
                USER,
                [act("inform", ("intent", "book"), refs=[FrameReference(self.store.active)])],
                "Great , please book it now .",
            )
            self.emit(
                WIZARD,
                [act("inform", ("action", "book")), act("thankyou")],
                "Done , I will book it right away . Thank you !",
            )
            self.booked = True
            self.emit(USER, [act("thankyou"), act("goodbye")], "Thank you so much , bye !")
            self.emit(WIZARD, [act("you_are_welcome"), act("goodbye")], "You are welcome ! Goodbye !")
            return "booked", False

        if rng.random() < cfg.p_request_alts:
            self.emit(
                USER,
                [act("request_alts", refs=[FrameReference(self.store.active)])],
                "What else could you offer ?",
            )
            return self.wizard_search_and_offer(), False

        if rng.random() < cfg.p_modify and self.user_modify():
            return self.wizard_search_and_offer(), False
        return "offered", False


def simulate_dialogue(
    task: GeneratedTask,
    db: list[Package],
    seed: int,
    config: SimulatorConfig | None = None,
    dialogue_id: str = "sim-0",
    user_id: str = "U00",
    wizard_id: str = "W00",
) -> Dialogue:
    """Generate one fully annotated dialogue for a task; deterministic per seed."""
    config = config or SimulatorConfig()
    rng = random.Random(seed)
    sim = _Simulation(task, db, rng, config)
    sim.run()
    rating = rng.choices((5, 4, 3), weights=(0.7, 0.2, 0.1))[0] if sim.booked else rng.choices((4, 3, 2, 1), weights=(0.3, 0.3, 0.2, 0.2))[0]
    return Dialogue(
        id=dialogue_id,
        user_id=user_id,
        wizard_id=wizard_id,
        turns=sim.turns,
        user_survey_rating=rating,
        wizard_task_successful=sim.booked,
    )


def simulate_corpus(
    db: list[Package],
    n_dialogues: int,
    seed: int,
    config: SimulatorConfig | None = None,
) -> list[Dialogue]:
    """A deterministic corpus of simulated dialogues spread over simulated users."""
    config = config or SimulatorConfig()
    tasks = instantiate_tasks(DEFAULT_TEMPLATES, db, n_dialogues, config.task_success_rate, seed)
    rng = random.Random(("corpus", seed).__repr__())
    dialogues = []
    for i, task in enumerate(tasks):
        dialogues.append(
            simulate_dialogue(
                task,
                db,
                seed=rng.randrange(2**62),
                config=config,
                dialogue_id=f"sim-{seed}-{i:04d}",
                user_id=f"U{i % config.n_users:02d}",
                wizard_id=f"W{i % config.n_wizards:02d}",
            )
        )
    return dialogues

"""Frame-tracking metrics, the leave-one-user-out protocol, and corpus
statistics.

Frame identification compares, per dialogue act, the gold (key, value,
frame) triples against the predicted ones; a prediction is correct only
when all three components are equal (value equality is exact after
whitespace normalization, with no fuzzy matching). The score is the number
of correct predictions over the number of gold pairs.

Frame creation is the fraction of user turns whose created/not-created
boolean is predicted correctly.
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass, field

from .engine import FrameStore
from .model import Dialogue, Frame, Turn, USER
from .trackers import RefPair, TrackerPrediction, gold_pairs
from .values import normalize_text


def _normalize_pair(p: RefPair) -> tuple[int, str | None, str | None]:
    return (p.frame, p.key, normalize_text(p.value) if p.value is not None else None)


@dataclass
class PairCount:
    correct: int = 0
    total: int = 0

    def add(self, other: "PairCount") -> None:
        self.correct += other.correct
        self.total += other.total

    @property
    def fraction(self) -> float:
        return self.correct / self.total if self.total else 0.0


def score_identification(gold_stream: list[list[RefPair]], pred_stream: list[list[RefPair]]) -> PairCount:
    """Multiset agreement between gold and predicted pairs, act by act."""
    if len(gold_stream) != len(pred_stream):
        raise ValueError(f"misaligned act streams: {len(gold_stream)} gold vs {len(pred_stream)} predicted")
    count = PairCount()
    for gold, pred in zip(gold_stream, pred_stream):
        gold_counter = Counter(_normalize_pair(p) for p in gold)
        pred_counter = Counter(_normalize_pair(p) for p in pred)
        count.correct += sum((gold_counter & pred_counter).values())
        count.total += sum(gold_counter.values())
    return count


def score_creation(gold: list[bool], pred: list[bool]) -> PairCount:
    """Fraction of turns whose creation boolean is right."""
    if len(gold) != len(pred):
        raise ValueError(f"misaligned turn streams: {len(gold)} gold vs {len(pred)} predicted")
    correct = sum(1 for g, p in zip(gold, pred) if g == p)
    return PairCount(correct, len(gold))


# ---------------------------------------------------------------------------
# corpus-level evaluation


@dataclass
class DialogueScore:
    dialogue_id: str
    identification: PairCount
    creation: PairCount


@dataclass
class EvalReport:
    frame_identification: float
    frame_creation: float
    n_pairs: int
    n_turns: int
    per_dialogue: list[DialogueScore] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "frame_identification": self.frame_identification,
            "frame_creation": self.frame_creation,
            "n_pairs": self.n_pairs,
            "n_turns": self.n_turns,
            "per_dialogue": [
                {
                    "id": s.dialogue_id,
                    "identification": s.identification.fraction,
                    "identification_pairs": s.identification.total,
                    "creation": s.creation.fraction,
                    "creation_turns": s.creation.total,
                }
                for s in self.per_dialogue
            ],
        }


def _store_from_snapshot(frames: list[Frame], active: int) -> FrameStore:
    copies = [f.copy() for f in frames]
    next_id = max((f.frame_id for f in copies), default=0) + 1
    return FrameStore(frames=copies, active=active, next_id=next_id)


def history_before(dialogue: Dialogue, turn_index: int) -> FrameStore:
    """The gold frame history available to a tracker at a turn: the previous
    turn's stored snapshot, or the initial single-frame store."""
    if turn_index == 0:
        return FrameStore(frames=[Frame(frame_id=1)], active=1, next_id=2)
    prev = dialogue.turns[turn_index - 1]
    return _store_from_snapshot(prev.frames, prev.active_frame)


def _turn_creates(dialogue: Dialogue, turn_index: int, turn: Turn) -> bool:
    before = len(dialogue.turns[turn_index - 1].frames) if turn_index else 1
    return len(turn.frames) > before


def evaluate_tracker(corpus: list[Dialogue], tracker, include_wizard_turns: bool = False) -> EvalReport:
    """Run a tracker over every (by default user) turn of a gold corpus."""
    identification = PairCount()
    creation = PairCount()
    per_dialogue = []
    for d_index, d in enumerate(corpus):
        tracker.begin_dialogue(d_index)
        d_ident = PairCount()
        d_create = PairCount()
        for i, turn in enumerate(d.turns):
            if turn.author != USER and not include_wizard_turns:
                continue
            store = history_before(d, i)
            prediction: TrackerPrediction = tracker.predict(store, list(turn.acts_without_refs), turn_index=i)
            gold_stream = [gold_pairs(a) for a in turn.acts]
            d_ident.add(score_identification(gold_stream, prediction.act_refs))
            d_create.add(score_creation([_turn_creates(d, i, turn)], [prediction.creates_frame]))
        identification.add(d_ident)
        creation.add(d_create)
        per_dialogue.append(DialogueScore(d.id, d_ident, d_create))
    return EvalReport(
        frame_identification=identification.fraction,
        frame_creation=creation.fraction,
        n_pairs=identification.total,
        n_turns=creation.total,
        per_dialogue=per_dialogue,
    )


# ---------------------------------------------------------------------------
# leave-one-user-out splits

# Participants whose dialogues are pooled into one test user.
MERGED_USERS = frozenset({"U21E41CQP", "U23KPC9QV"})


@dataclass
class Fold:
    held_out_user: str
    train: list[str]
    validation: list[str]
    test: list[str]


@dataclass
class SplitPlan:
    folds: list[Fold]

    def to_dict(self) -> dict:
        return {
            "folds": [
                {"held_out_user": f.held_out_user, "train": f.train, "validation": f.validation, "test": f.test}
                for f in self.folds
            ]
        }


def _user_key(user_id: str) -> str:
    return "+".join(sorted(MERGED_USERS)) if user_id in MERGED_USERS else user_id


def make_splits(corpus: list[Dialogue], seed: int = 0) -> SplitPlan:
    """One fold per (merged) user: test on that user's dialogues, split the
    rest 80:20 into train and validation."""
    import random

    by_user: dict[str, list[str]] = {}
    for d in corpus:
        by_user.setdefault(_user_key(d.user_id), []).append(d.id)
    if len(by_user) < 2:
        raise ValueError(f"need at least 2 users for leave-one-user-out, got {len(by_user)}")
    folds = []
    for user in sorted(by_user):
        rest = [did for u in sorted(by_user) if u != user for did in by_user[u]]
        rng = random.Random((seed, user).__repr__())
        rng.shuffle(rest)
        n_val = max(1, round(0.2 * len(rest))) if len(rest) > 1 else 0
        folds.append(
            Fold(
                held_out_user=user,
                train=sorted(rest[n_val:]),
                validation=sorted(rest[:n_val]),
                test=sorted(by_user[user]),
            )
        )
    return SplitPlan(folds)


def fold_mean_std(values: list[float]) -> tuple[float, float]:
    """Mean and population-free (sample) standard deviation across folds."""
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, std


# ---------------------------------------------------------------------------
# corpus statistics


@dataclass
class StatsReport:
    n_dialogues: int
    n_turns: int
    mean_turns: float
    acts_per_turn: dict[int, int]
    act_frequency: dict[str, int]
    mean_frames: float
    mean_switches: float
    rating_histogram: dict[int, int]
    n_users: int

    def to_dict(self) -> dict:
        return {
            "n_dialogues": self.n_dialogues,
            "n_turns": self.n_turns,
            "mean_turns": self.mean_turns,
            "acts_per_turn": {str(k): v for k, v in sorted(self.acts_per_turn.items())},
            "act_frequency": dict(sorted(self.act_frequency.items())),
            "mean_frames": self.mean_frames,
            "mean_switches": self.mean_switches,
            "rating_histogram": {str(k): v for k, v in sorted(self.rating_histogram.items())},
            "n_users": self.n_users,
        }

    def format_table(self) -> str:
        lines = [
            f"dialogues            {self.n_dialogues}",
            f"turns                {self.n_turns}",
            f"mean turns/dialogue  {self.mean_turns:.2f}",
            f"mean frames/dialogue {self.mean_frames:.2f}",
            f"mean switches        {self.mean_switches:.2f}",
            f"users                {self.n_users}",
            "acts per turn        " + ", ".join(f"{k}:{v}" for k, v in sorted(self.acts_per_turn.items())),
            "ratings              " + ", ".join(f"{k}:{v}" for k, v in sorted(self.rating_histogram.items())),
            "act frequencies:",
        ]
        for name, n in sorted(self.act_frequency.items(), key=lambda kv: (-kv[1], kv[0])):
            lines.append(f"  {name:<18} {n}")
        return "\n".join(lines)


def corpus_stats(corpus: list[Dialogue]) -> StatsReport:
    n_turns = 0
    acts_per_turn: Counter = Counter()
    act_frequency: Counter = Counter()
    frames_counts = []
    switch_counts = []
    ratings: Counter = Counter()
    users = set()
    for d in corpus:
        users.add(d.user_id)
        n_turns += len(d.turns)
        if d.user_survey_rating is not None:
            ratings[d.user_survey_rating] += 1
        active = 1
        switches = 0
        for turn in d.turns:
            acts_per_turn[len(turn.acts)] += 1
            for a in turn.acts:
                act_frequency[a.name] += 1
            if turn.active_frame != active:
                switches += 1
            active = turn.active_frame
        frames_counts.append(len(d.turns[-1].frames) if d.turns else 0)
        switch_counts.append(switches)
    n = len(corpus)
    return StatsReport(
        n_dialogues=n,
        n_turns=n_turns,
        mean_turns=n_turns / n if n else 0.0,
        acts_per_turn=dict(acts_per_turn),
        act_frequency=dict(act_frequency),
        mean_frames=statistics.fmean(frames_counts) if frames_counts else 0.0,
        mean_switches=statistics.fmean(switch_counts) if switch_counts else 0.0,
        rating_histogram=dict(ratings),
        n_users=len(users),
    )

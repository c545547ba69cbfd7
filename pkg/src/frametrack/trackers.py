"""Frame-tracking baselines.

Given only the acts with their reference labels stripped plus the frame
history, a tracker predicts whether the user turn creates a frame and, for
each act, which frame(s) it references.

The rule tracker applies three hand-written rules to an act ``a(k=v)``
evaluated in the current frame ``f``:

1. create (and move to) a new frame if ``a`` is ``inform``, ``f[k]`` is set,
   and ``v`` matches none of its values;
2. for ``switch_frame``, pick the frame ``g`` with ``g[k]`` matching ``v``;
   with no match, pick the most recently created frame;
3. for any other act that may carry a reference, pick ``g`` with ``g[k]``
   matching ``v``, most recent first in ambiguous cases; with no match,
   keep the current frame.

The random tracker samples, per (act name, slot key), whether the reference
stays on the current frame using priors fitted on a labeled corpus, and
otherwise draws uniformly from the frames created so far.

Matching uses the engine's shallow value normalization, so synonyms are
never resolved; that weakness is intentional.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator

from .engine import FrameStore
from .inventory import is_ref_capable
from .model import Dialogue, DialogueAct, Frame, USER


@dataclass(frozen=True)
class RefPair:
    """One scored unit: the referenced frame plus the (key, value) used to
    refer to it; key and value may be null."""

    frame: int
    key: str | None = None
    value: str | None = None


@dataclass
class TrackerPrediction:
    creates_frame: bool
    act_refs: list[list[RefPair]]


def gold_pairs(a: DialogueAct) -> list[RefPair]:
    """Scoring pairs of a gold-labeled act: one per annotation entry of each
    plain reference, or a null pair for a bare reference."""
    pairs: list[RefPair] = []
    for ref in a.refs:
        if ref.kind != "ref":
            continue
        if not ref.annotation:
            pairs.append(RefPair(ref.target_frame))
        else:
            for k, v in ref.annotation:
                pairs.append(RefPair(ref.target_frame, k, v.raw if v is not None else None))
    return pairs


def _matching_frames(frames: list[Frame], key: str, raw: str) -> list[Frame]:
    return [f for f in frames if f.has_matching_value(key, raw)]


def rule_track(store: FrameStore, acts: list[DialogueAct]) -> TrackerPrediction:
    """Apply the three rules to one user turn of ref-stripped acts."""
    current = store.active
    creates = False
    act_refs: list[list[RefPair]] = []
    frames = store.frames

    for a in acts:
        pairs: list[RefPair] = []
        if not is_ref_capable(a.name):
            act_refs.append(pairs)
            continue

        valued = a.valued_args()

        if a.name == "inform" and not creates:
            f = next((fr for fr in frames if fr.frame_id == current), None)
            conflict = f is not None and any(
                f.positive_values(k) and not f.has_matching_value(k, v.raw) for k, v in valued
            )
            if conflict:
                creates = True
                current = store.next_id
                act_refs.append([RefPair(current)])
                continue

        if a.name == "switch_frame":
            target = None
            matched_kv = None
            for k, v in valued:
                candidates = _matching_frames(frames, k, v.raw)
                if candidates:
                    target = max(candidates, key=lambda fr: fr.frame_id).frame_id
                    matched_kv = (k, v.raw)
                    break
            if target is None:
                target = max(fr.frame_id for fr in frames)
            current = target
            if matched_kv:
                pairs.append(RefPair(target, matched_kv[0], matched_kv[1]))
            else:
                pairs.append(RefPair(target))
            act_refs.append(pairs)
            continue

        for k, v in valued:
            candidates = _matching_frames(frames, k, v.raw)
            if candidates:
                best = max(candidates, key=lambda fr: fr.frame_id)
                pairs.append(RefPair(best.frame_id, k, v.raw))
        if not pairs:
            pairs.append(RefPair(current))
        act_refs.append(pairs)

    return TrackerPrediction(creates, act_refs)


@dataclass
class RefPriors:
    """Per (act name, slot key) probability that a reference targets the
    frame active when the user speaks, plus the global fallback and the
    per-user-turn frame-creation rate."""

    table: dict[tuple[str, str | None], float] = field(default_factory=dict)
    global_prior: float = 1.0
    creation_prior: float = 0.0

    def probability(self, act_name: str, key: str | None) -> float:
        return self.table.get((act_name, key), self.global_prior)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            fp.write(f"_global_ - {self.global_prior!r}\n")
            fp.write(f"_creation_ - {self.creation_prior!r}\n")
            for (name, key), p in sorted(self.table.items(), key=lambda kv: (kv[0][0], kv[0][1] or "")):
                fp.write(f"{name} {key if key is not None else '-'} {p!r}\n")

    @classmethod
    def load(cls, path) -> "RefPriors":
        priors = cls()
        with open(path, encoding="utf-8") as fp:
            for line in fp:
                name, key, p = line.split()
                if name == "_global_":
                    priors.global_prior = float(p)
                elif name == "_creation_":
                    priors.creation_prior = float(p)
                else:
                    priors.table[(name, None if key == "-" else key)] = float(p)
        return priors


def fit_priors(corpus: list[Dialogue]) -> RefPriors:
    """Count, per (act name, slot key), how often a gold reference targets the
    frame that was active when the user spoke."""
    if not corpus:
        raise ValueError("cannot fit priors on an empty corpus")
    counts: dict[tuple[str, str | None], list[int]] = {}
    total = [0, 0]
    user_turns = 0
    creations = 0
    for d in corpus:
        active_before = 1
        frames_before = 1
        for turn in d.turns:
            if turn.author == USER:
                user_turns += 1
                if len(turn.frames) > frames_before:
                    creations += 1
                for a in turn.acts:
                    for pair in gold_pairs(a):
                        cell = counts.setdefault((a.name, pair.key), [0, 0])
                        hit = 1 if pair.frame == active_before else 0
                        cell[0] += hit
                        cell[1] += 1
                        total[0] += hit
                        total[1] += 1
            active_before = turn.active_frame
            frames_before = len(turn.frames)
    priors = RefPriors()
    priors.table = {k: hits / n for k, (hits, n) in counts.items()}
    priors.global_prior = total[0] / total[1] if total[1] else 1.0
    priors.creation_prior = creations / user_turns if user_turns else 0.0
    return priors


def random_track(priors: RefPriors, store: FrameStore, acts: list[DialogueAct], rng_seed: int) -> TrackerPrediction:
    """Sample reference targets per (act, slot) from the fitted priors;
    bit-reproducible for a fixed seed."""
    rng = random.Random(rng_seed)
    ids = store.ids()
    current = store.active
    creates = rng.random() < priors.creation_prior
    act_refs: list[list[RefPair]] = []
    for a in acts:
        pairs: list[RefPair] = []
        if not is_ref_capable(a.name):
            act_refs.append(pairs)
            continue
        valued = a.valued_args()
        if valued:
            for k, v in valued:
                if rng.random() < priors.probability(a.name, k):
                    pairs.append(RefPair(current, k, v.raw))
                else:
                    pairs.append(RefPair(rng.choice(ids), k, v.raw))
        else:
            if rng.random() < priors.probability(a.name, None):
                pairs.append(RefPair(current))
            else:
                pairs.append(RefPair(rng.choice(ids)))
        act_refs.append(pairs)
    return TrackerPrediction(creates, act_refs)


def _derive_seed(*parts) -> int:
    digest = hashlib.blake2b(":".join(str(p) for p in parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class RuleFrameTracker(BaseEstimator):
    """Deterministic rule-based tracker; ``fit`` is a no-op kept for API
    symmetry."""

    def fit(self, dialogues=None, y=None):
        return self

    def begin_dialogue(self, dialogue_index: int) -> None:
        pass

    def predict(self, store: FrameStore, acts: list[DialogueAct], turn_index: int = 0) -> TrackerPrediction:
        return rule_track(store, acts)


class RandomFrameTracker(BaseEstimator):
    """Prior-sampling tracker; deterministic given ``seed``."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def fit(self, dialogues: list[Dialogue], y=None):
        self.priors_ = fit_priors(dialogues)
        return self

    def begin_dialogue(self, dialogue_index: int) -> None:
        self._dialogue_index = dialogue_index

    def predict(self, store: FrameStore, acts: list[DialogueAct], turn_index: int = 0) -> TrackerPrediction:
        seed = _derive_seed(self.seed, getattr(self, "_dialogue_index", 0), turn_index)
        return random_track(self.priors_, store, acts, seed)


class CurrentFrameTracker(BaseEstimator):
    """Degenerate baseline: never creates, always points at the active frame."""

    def fit(self, dialogues=None, y=None):
        return self

    def begin_dialogue(self, dialogue_index: int) -> None:
        pass

    def predict(self, store: FrameStore, acts: list[DialogueAct], turn_index: int = 0) -> TrackerPrediction:
        act_refs = [[RefPair(store.active)] if is_ref_capable(a.name) else [] for a in acts]
        return TrackerPrediction(False, act_refs)


TRACKERS = {
    "rule": RuleFrameTracker,
    "random": RandomFrameTracker,
    "current": CurrentFrameTracker,
}


def make_tracker(name: str, seed: int = 0):
    if name not in TRACKERS:
        raise ValueError(f"unknown tracker {name!r}; choose from {sorted(TRACKERS)}")
    if name == "random":
        return RandomFrameTracker(seed=seed)
    return TRACKERS[name]()

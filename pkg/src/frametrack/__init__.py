"""Multi-frame dialogue tracking toolkit.

Data model and corpus I/O, a textual act-annotation grammar, the gold
replay engine, rule/random frame-tracking baselines, frame metrics with
the leave-one-user-out protocol, a character-trigram NLU tagger, and a
synthetic travel domain (database, search with constraint-relaxation
suggestions, task generation, and an annotated-dialogue simulator).
"""

from .corpus import load_corpus, save_corpus
from .engine import FrameStore, apply_turn, init_store, replay
from .evaluation import corpus_stats, evaluate_tracker, make_splits, score_creation, score_identification
from .grammar import parse_acts, render_acts
from .model import Dialogue, DialogueAct, Frame, FrameReference, SlotValue, Turn, validate_dialogue
from .trackers import (
    CurrentFrameTracker,
    RandomFrameTracker,
    RefPriors,
    RuleFrameTracker,
    TrackerPrediction,
    fit_priors,
    random_track,
    rule_track,
)
from .values import value_matches

__version__ = "0.1.0"

__all__ = [
    "load_corpus",
    "save_corpus",
    "FrameStore",
    "apply_turn",
    "init_store",
    "replay",
    "corpus_stats",
    "evaluate_tracker",
    "make_splits",
    "score_creation",
    "score_identification",
    "parse_acts",
    "render_acts",
    "Dialogue",
    "DialogueAct",
    "Frame",
    "FrameReference",
    "SlotValue",
    "Turn",
    "validate_dialogue",
    "CurrentFrameTracker",
    "RandomFrameTracker",
    "RefPriors",
    "RuleFrameTracker",
    "TrackerPrediction",
    "fit_priors",
    "random_track",
    "rule_track",
    "value_matches",
    "__version__",
]

from .iob import TaggedUtterance, derive_iob, tokenize, word_trigrams
from .tagger import TrainConfig, TrigramTagger, f1, train

__all__ = [
    "TaggedUtterance",
    "derive_iob",
    "tokenize",
    "word_trigrams",
    "TrainConfig",
    "TrigramTagger",
    "f1",
    "train",
]

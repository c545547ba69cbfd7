import random
from collections import Counter

import pytest

from frametrack.engine import FrameStore, init_store
from frametrack.grammar import parse_acts
from frametrack.model import Frame, SlotValue
from frametrack.trackers import (
    CurrentFrameTracker,
    RandomFrameTracker,
    RefPair,
    RefPriors,
    RuleFrameTracker,
    fit_priors,
    gold_pairs,
    make_tracker,
    random_track,
    rule_track,
)


def store_with(frames: dict[int, dict[str, str]], active: int) -> FrameStore:
    built = []
    for fid in sorted(frames):
        built.append(Frame(frame_id=fid, constraints={k: [SlotValue(v)] for k, v in frames[fid].items()}))
    return FrameStore(frames=built, active=active, next_id=max(frames) + 1)


# rule 1: create on a changed value ------------------------------------------


def test_rule_one_creates_on_conflicting_inform():
    store = store_with({1: {"dst_city": "Atlantis", "n_adults": "8", "budget": "1700"}}, active=1)
    pred = rule_track(store, parse_acts("inform(dst_city=Neverland, n_adults=5, budget=1900)"))
    assert pred.creates_frame
    assert pred.act_refs == [[RefPair(2)]]


def test_rule_one_needs_a_set_conflicting_value():
    store = store_with({1: {}}, active=1)
    pred = rule_track(store, parse_acts("inform(dst_city=Atlantis)"))
    assert not pred.creates_frame
    # no frame holds the value, so the ref falls back to the current frame
    assert pred.act_refs == [[RefPair(1)]]


def test_rule_one_matching_value_is_no_change():
    store = store_with({1: {"budget": "1700"}}, active=1)
    pred = rule_track(store, parse_acts("inform(budget=1700)"))
    assert not pred.creates_frame
    assert pred.act_refs == [[RefPair(1, "budget", "1700")]]


# rule 2: switch_frame --------------------------------------------------------


def test_rule_two_switches_to_matching_frame():
    store = store_with({1: {"name": "Tropic"}, 2: {"name": "El Mar"}}, active=2)
    pred = rule_track(store, parse_acts("switch_frame(name=Tropic)"))
    assert pred.act_refs == [[RefPair(1, "name", "Tropic")]]


def test_rule_two_brute_force_agreement():
    rng = random.Random(3)
    names = ["Tropic", "El Mar", "Zephyr", "Onyx"]
    for _ in range(200):
        n = rng.randint(1, 4)
        frames = {i + 1: {"name": rng.choice(names)} for i in range(n)}
        store = store_with(frames, active=rng.randint(1, n))
        wanted = rng.choice(names)
        pred = rule_track(store, parse_acts(f"switch_frame(name={wanted})"))
        matching = [fid for fid, c in frames.items() if c["name"].casefold() == wanted.casefold()]
        expected = max(matching) if matching else max(frames)
        assert pred.act_refs[0][0].frame == expected


def test_rule_two_fallback_most_recent():
    store = store_with({1: {"name": "Tropic"}, 2: {}, 3: {}}, active=1)
    pred = rule_track(store, parse_acts("switch_frame(name=Nowhere)"))
    assert pred.act_refs == [[RefPair(3)]]


def test_rule_two_fallback_without_values():
    store = store_with({1: {}, 2: {}, 3: {}}, active=1)
    pred = rule_track(store, parse_acts("switch_frame"))
    assert pred.act_refs == [[RefPair(3)]]


# rule 3: ref assignment ------------------------------------------------------


def test_rule_three_assigns_matching_frame():
    store = store_with({1: {"price": "812.69"}, 2: {"price": "1002.27"}}, active=1)
    pred = rule_track(store, parse_acts("request(price=1002.27)"))
    assert pred.act_refs == [[RefPair(2, "price", "1002.27")]]


def test_rule_three_most_recent_wins_ambiguity():
    store = store_with({1: {"seat": "economy"}, 2: {"seat": "economy"}, 3: {}}, active=1)
    pred = rule_track(store, parse_acts("confirm(seat=economy)"))
    assert pred.act_refs == [[RefPair(2, "seat", "economy")]]


def test_rule_three_fallback_current_frame():
    store = store_with({1: {}, 2: {}}, active=1)
    pred = rule_track(store, parse_acts("request(breakfast)"))
    assert pred.act_refs == [[RefPair(1)]]


def test_non_ref_acts_get_no_pairs():
    store = init_store()
    pred = rule_track(store, parse_acts("thankyou; goodbye"))
    assert pred.act_refs == [[], []]


def test_rule_tracker_never_dangles():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 5)
        frames = {i + 1: ({"price": str(rng.randint(1, 4) * 100)} if rng.random() < 0.7 else {}) for i in range(n)}
        store = store_with(frames, active=rng.randint(1, n))
        acts = parse_acts(rng.choice([
            "inform(price=200)",
            "switch_frame(price=300)",
            "request(price=100)",
            "request(breakfast)",
            "inform(dst_city=Atlantis)",
        ]))
        pred = rule_track(store, acts)
        allowed = set(frames) | {store.next_id}
        for pairs in pred.act_refs:
            for pair in pairs:
                assert pair.frame in allowed


def test_no_values_no_switch_means_no_creation_and_active_refs():
    store = store_with({1: {"price": "100"}, 2: {"price": "200"}}, active=2)
    pred = rule_track(store, parse_acts("request(breakfast); moreinfo; affirm"))
    assert not pred.creates_frame
    assert all(pairs == [RefPair(2)] for pairs in pred.act_refs)


# priors -----------------------------------------------------------------------


def test_fit_priors_all_current(small_corpus):
    priors = fit_priors(small_corpus)
    assert 0.0 <= priors.global_prior <= 1.0
    assert 0.0 <= priors.creation_prior <= 1.0
    for p in priors.table.values():
        assert 0.0 <= p <= 1.0


def test_fit_priors_hand_count():
    # three dialogues, each one user turn with an inform(dst_city) gold ref;
    # two refs target the frame active when the user speaks (frame 1)
    from frametrack.model import Dialogue, FrameReference, Turn, act

    def one(ref_target, n_frames):
        annotation = (("dst_city", SlotValue("Atlantis")),)
        acts = [act("inform", ("dst_city", "Atlantis"), refs=[FrameReference(ref_target, "ref", annotation)])]
        frames = [Frame(frame_id=i + 1) for i in range(n_frames)]
        return Dialogue(
            id=f"d{ref_target}-{n_frames}",
            user_id="U",
            wizard_id="W",
            turns=[
                Turn(author="user", text="x", acts=acts, acts_without_refs=[a.without_refs() for a in acts],
                     active_frame=1, frames=frames, timestamp=0)
            ],
        )

    corpus = [one(1, 1), one(1, 2), one(2, 2)]
    priors = fit_priors(corpus)
    assert priors.table[("inform", "dst_city")] == pytest.approx(2 / 3)
    assert priors.global_prior == pytest.approx(2 / 3)


def test_priors_empty_corpus_errors():
    with pytest.raises(ValueError):
        fit_priors([])


def test_priors_round_trip_file(tmp_path, small_corpus):
    priors = fit_priors(small_corpus)
    path = tmp_path / "priors.txt"
    priors.save(path)
    loaded = RefPriors.load(path)
    assert loaded.table == priors.table
    assert loaded.global_prior == priors.global_prior
    assert loaded.creation_prior == priors.creation_prior


def test_unseen_pair_uses_global_prior():
    priors = RefPriors(table={("inform", "price"): 0.1}, global_prior=0.77)
    assert priors.probability("request", "seat") == 0.77


# random tracker ----------------------------------------------------------------


def test_random_single_frame_always_one():
    priors = RefPriors(global_prior=0.0, creation_prior=0.0)
    store = init_store()
    for seed in range(20):
        pred = random_track(priors, store, parse_acts("inform(dst_city=Atlantis)"), seed)
        assert pred.act_refs == [[RefPair(1, "dst_city", "Atlantis")]]


def test_random_p_one_is_current_frame_tracker():
    priors = RefPriors(global_prior=1.0, creation_prior=0.0)
    store = store_with({1: {}, 2: {}, 3: {}}, active=2)
    for seed in range(20):
        pred = random_track(priors, store, parse_acts("request(breakfast)"), seed)
        assert pred.act_refs == [[RefPair(2)]]


def test_random_reproducible_bit_for_bit():
    priors = RefPriors(global_prior=0.4, creation_prior=0.3)
    store = store_with({1: {}, 2: {}, 3: {}, 4: {}}, active=1)
    acts = parse_acts("inform(dst_city=Atlantis, budget=100); request(breakfast)")
    a = random_track(priors, store, acts, 123)
    b = random_track(priors, store, acts, 123)
    assert a == b
    c = random_track(priors, store, acts, 124)
    assert a != c


def test_random_uniform_over_frames_at_p_zero():
    priors = RefPriors(global_prior=0.0, creation_prior=0.0)
    store = store_with({1: {}, 2: {}, 3: {}, 4: {}}, active=1)
    acts = parse_acts("request(breakfast)")
    hist = Counter()
    n = 10000
    for seed in range(n):
        pred = random_track(priors, store, acts, seed)
        hist[pred.act_refs[0][0].frame] += 1
    for fid in (1, 2, 3, 4):
        assert abs(hist[fid] / n - 0.25) < 0.02


def test_gold_pairs_extraction():
    [a] = parse_acts("switch_frame(name=Tropic, ref=[2{name=Tropic}])")
    assert gold_pairs(a) == [RefPair(2, "name", "Tropic")]
    [b] = parse_acts("request_compare(price, ref=[2, 3])")
    assert gold_pairs(b) == [RefPair(2), RefPair(3)]
    [c] = parse_acts("inform(read=[7{price=10}])")
    assert gold_pairs(c) == []  # read/write are not scored references


def test_make_tracker_names():
    assert isinstance(make_tracker("rule"), RuleFrameTracker)
    assert isinstance(make_tracker("random", seed=3), RandomFrameTracker)
    assert isinstance(make_tracker("current"), CurrentFrameTracker)
    with pytest.raises(ValueError):
        make_tracker("neural")


def test_estimator_get_params():
    tracker = RandomFrameTracker(seed=9)
    assert tracker.get_params() == {"seed": 9}
    tracker.set_params(seed=4)
    assert tracker.seed == 4

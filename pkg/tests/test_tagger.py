import numpy as np
import pytest

from frametrack.nlu.iob import TaggedUtterance
from frametrack.nlu.tagger import TrainConfig, TrigramTagger, encode_words, f1, train

UTTS = [
    TaggedUtterance(["go", "to", "Rome"], ["O", "O", "B-dst_city"], ["inform", "inform", "inform"]),
    TaggedUtterance(["hi", "there"], ["O", "O"], ["greeting", "O"]),
    TaggedUtterance(["budget", "900"], ["O", "B-budget"], ["O", "inform"]),
]


def small_tagger(seed=0, dim=6) -> TrigramTagger:
    tagger = TrigramTagger(dim=dim, seed=seed)
    tagger._build(UTTS, np.random.default_rng(seed))
    return tagger


def test_forward_distributions_sum_to_one():
    tagger = small_tagger()
    act_probs, slot_probs = tagger.forward(["go", "to", "Rome", "zzz"])
    assert np.allclose(act_probs.sum(axis=1), 1.0, atol=1e-6)
    assert np.allclose(slot_probs.sum(axis=1), 1.0, atol=1e-6)


def test_zero_embeddings_give_identical_rows():
    tagger = small_tagger()
    tagger.params_["E"][:] = 0.0
    act_probs, slot_probs = tagger.forward(["alpha", "omega"])
    assert np.allclose(act_probs[0], act_probs[1])
    assert np.allclose(slot_probs[0], slot_probs[1])


def test_forward_is_word_local():
    tagger = small_tagger()
    a1, s1 = tagger.forward(["go", "Rome"])
    a2, s2 = tagger.forward(["Rome", "go"])
    assert np.allclose(a1[0], a2[1]) and np.allclose(a1[1], a2[0])
    assert np.allclose(s1[0], s2[1]) and np.allclose(s1[1], s2[0])


def test_unknown_trigrams_map_to_unk():
    tagger = small_tagger()
    ids = encode_words(["qqq"], tagger.vocab_, tagger.width_)
    assert set(ids[0][: len("qqq")]) == {1}


def test_masked_loss_zero_when_all_o_predicted():
    tagger = small_tagger()
    ids = encode_words(["go", "to"], tagger.vocab_, tagger.width_)
    gold = np.zeros(2, dtype=np.int64)
    # force argmax to the O column on both heads
    tagger.params_["ba"][:] = 0.0
    tagger.params_["ba"][0] = 50.0
    tagger.params_["bs"][:] = 0.0
    tagger.params_["bs"][0] = 50.0
    loss, grads = tagger.loss_and_grads(ids, gold, gold)
    assert loss == 0.0
    assert all(np.all(g == 0.0) for g in grads.values())


def test_masked_loss_equals_plain_crossentropy_on_non_o_word():
    tagger = small_tagger()
    tagger.params_["ba"][:] = 0.0
    tagger.params_["ba"][0] = 50.0
    tagger.params_["bs"][:] = 0.0
    tagger.params_["bs"][0] = 50.0
    ids = encode_words(["go", "Rome"], tagger.vocab_, tagger.width_)
    act_gold = np.array([0, tagger.act_labels_.index("inform")])
    slot_gold = np.array([0, 0])
    loss, _ = tagger.loss_and_grads(ids, act_gold, slot_gold)
    # word 0 masks out on both heads; word 1 slot head is a correct O and
    # masks out; only word 1's act crossentropy remains
    h, act_probs, _ = tagger.forward_ids(ids)
    expected = -np.log(act_probs[1, act_gold[1]])
    assert loss == pytest.approx(float(expected), rel=1e-9)


def test_loss_nonnegative():
    tagger = small_tagger(seed=3)
    ids = encode_words(["go", "to", "Rome"], tagger.vocab_, tagger.width_)
    gold_a = np.array([1 % len(tagger.act_labels_), 0, 0])
    gold_s = np.array([0, 0, 1 % len(tagger.slot_labels_)])
    loss, _ = tagger.loss_and_grads(ids, gold_a, gold_s)
    assert loss >= 0.0


def _finite_difference_check(tagger, ids, gold_a, gold_s, eps=1e-6, tol=1e-4):
    loss, grads = tagger.loss_and_grads(ids, gold_a, gold_s)
    worst = 0.0
    for key in ("E", "Wa", "ba", "Ws", "bs"):
        p = tagger.params_[key]
        flat = p.reshape(-1)
        for idx in range(flat.size):
            if key == "E" and idx < p.shape[1]:  # PAD row is pinned to zero
                continue
            orig = flat[idx]
            flat[idx] = orig + eps
            lp, _ = tagger.loss_and_grads(ids, gold_a, gold_s)
            flat[idx] = orig - eps
            lm, _ = tagger.loss_and_grads(ids, gold_a, gold_s)
            flat[idx] = orig
            numeric = (lp - lm) / (2 * eps)
            analytic = grads[key].reshape(-1)[idx]
            worst = max(worst, abs(numeric - analytic) / max(1.0, abs(numeric), abs(analytic)))
    return worst


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(1)
    for trial in range(10):
        tagger = TrigramTagger(dim=int(rng.integers(3, 7)), seed=trial)
        tagger._build(UTTS, rng)
        words = ["go", "to", "Rome", "hi"][: int(rng.integers(2, 5))]
        ids = encode_words(words, tagger.vocab_, tagger.width_)
        gold_a = rng.integers(0, len(tagger.act_labels_), len(words))
        gold_s = rng.integers(0, len(tagger.slot_labels_), len(words))
        assert _finite_difference_check(tagger, ids, gold_a, gold_s) <= 1e-4


def test_training_is_bit_reproducible():
    a = train(TrainConfig(dim=8, epochs=3, seed=42), UTTS)
    b = train(TrainConfig(dim=8, epochs=3, seed=42), UTTS)
    for key in a.params_:
        assert np.array_equal(a.params_[key], b.params_[key])
    assert a.loss_history_ == b.loss_history_


def test_single_example_memorization():
    utt = TaggedUtterance(["go", "to", "Rome"], ["O", "O", "B-dst_city"], ["inform", "inform", "inform"])
    tagger = train(TrainConfig(dim=16, epochs=200, batch_size=1, seed=0), [utt])
    acts, slots = tagger.predict(utt.words)
    assert acts == utt.act_tags and slots == utt.slot_tags
    assert tagger.loss_history_[-1] < 1e-2


def test_loss_roughly_non_increasing():
    tagger = train(TrainConfig(dim=16, epochs=12, seed=0), UTTS)
    worst_rise = max(
        (b - a) for a, b in zip(tagger.loss_history_, tagger.loss_history_[1:])
    )
    assert worst_rise <= 1e-3 or tagger.loss_history_[-1] <= tagger.loss_history_[0]


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        train(TrainConfig(), [])


def test_config_validates():
    with pytest.raises(ValueError):
        TrainConfig(dim=0)
    with pytest.raises(ValueError):
        TrainConfig(lr=-1)


def test_checkpoint_round_trip(tmp_path):
    tagger = train(TrainConfig(dim=8, epochs=5, seed=7), UTTS)
    path = tmp_path / "model.npz"
    tagger.save(path)
    loaded = TrigramTagger.load(path)
    for utt in UTTS:
        assert loaded.predict(utt.words) == tagger.predict(utt.words)
    assert loaded.get_params() == tagger.get_params()


def test_f1_perfect_and_degenerate():
    assert f1(["B-a", "O", "B-b"], ["B-a", "O", "B-b"]).f1 == 1.0
    assert f1(["B-a", "O", "B-b"], ["O", "O", "O"]).f1 == 0.0


def test_f1_hand_case():
    # 10 words: 3 TP, 2 FP, 1 FN -> P=0.6, R=0.75, F1=0.6667
    gold = ["B-a", "B-a", "B-a", "B-b", "O", "O", "O", "O", "O", "O"]
    pred = ["B-a", "B-a", "B-a", "O", "B-b", "B-b", "O", "O", "O", "O"]
    score = f1(gold, pred)
    assert score.tp == 3 and score.fp == 2 and score.fn == 1
    assert score.precision == pytest.approx(0.6)
    assert score.recall == pytest.approx(0.75)
    assert score.f1 == pytest.approx(2 / 3, abs=1e-4)


def test_f1_length_mismatch():
    with pytest.raises(ValueError):
        f1(["O"], ["O", "O"])


def test_estimator_params_round_trip():
    tagger = TrigramTagger(dim=32, epochs=3)
    params = tagger.get_params()
    assert params["dim"] == 32 and params["epochs"] == 3
    tagger.set_params(dim=16)
    assert tagger.dim == 16

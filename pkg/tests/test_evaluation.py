import pytest

from frametrack.evaluation import (
    corpus_stats,
    evaluate_tracker,
    fold_mean_std,
    history_before,
    make_splits,
    score_creation,
    score_identification,
)
from frametrack.grammar import parse_acts
from frametrack.model import Dialogue, Frame, Turn
from frametrack.trackers import RefPair, RuleFrameTracker, gold_pairs


def test_identification_perfect_is_one():
    gold = [[RefPair(1, "name", "Tropic")], [RefPair(2)]]
    count = score_identification(gold, [list(p) for p in gold])
    assert count.fraction == 1.0 and count.total == 2


def test_identification_hand_case_two_of_three():
    gold = [[RefPair(1, "name", "Tropic"), RefPair(2, "price", "10"), RefPair(2, "seat", "economy")]]
    pred = [[RefPair(1, "name", "Tropic"), RefPair(2, "price", "10"), RefPair(2, "price", "economy")]]
    count = score_identification(gold, pred)
    assert count.correct == 2 and count.total == 3


def test_identification_requires_all_three_components():
    gold = [[RefPair(3, "name", "Tropic")]]
    assert score_identification(gold, [[RefPair(3, "name", "El Mar")]]).correct == 0
    assert score_identification(gold, [[RefPair(2, "name", "Tropic")]]).correct == 0
    assert score_identification(gold, [[RefPair(3, "seat", "Tropic")]]).correct == 0


def test_identification_null_key_value():
    gold = [[RefPair(4)]]
    assert score_identification(gold, [[RefPair(4)]]).correct == 1
    assert score_identification(gold, [[RefPair(4, "name", "x")]]).correct == 0


def test_identification_value_whitespace_normalized_but_exact():
    gold = [[RefPair(1, "name", "El  Mar")]]
    assert score_identification(gold, [[RefPair(1, "name", "El Mar")]]).correct == 1
    assert score_identification(gold, [[RefPair(1, "name", "el mar")]]).correct == 0


def test_identification_misaligned_errors():
    with pytest.raises(ValueError):
        score_identification([[]], [[], []])


def test_creation_hand_case():
    count = score_creation([False, True, False, True], [False, False, False, True])
    assert count.correct == 3 and count.total == 4


def test_creation_all_false_on_no_creations():
    assert score_creation([False] * 5, [False] * 5).fraction == 1.0


def test_creation_length_mismatch():
    with pytest.raises(ValueError):
        score_creation([True], [True, False])


def test_metrics_decompose_over_dialogues(small_corpus):
    tracker = RuleFrameTracker()
    report = evaluate_tracker(small_corpus, tracker)
    ident_num = sum(s.identification.correct for s in report.per_dialogue)
    ident_den = sum(s.identification.total for s in report.per_dialogue)
    assert report.frame_identification == pytest.approx(ident_num / ident_den)
    create_num = sum(s.creation.correct for s in report.per_dialogue)
    assert report.frame_creation == pytest.approx(create_num / report.n_turns)


def test_gold_against_itself_scores_one(small_corpus):
    class GoldTracker:
        def begin_dialogue(self, i):
            self.dialogue = small_corpus[i]

        def predict(self, store, acts, turn_index=0):
            from frametrack.trackers import TrackerPrediction

            turn = self.dialogue.turns[turn_index]
            before = len(self.dialogue.turns[turn_index - 1].frames) if turn_index else 1
            return TrackerPrediction(
                creates_frame=len(turn.frames) > before,
                act_refs=[gold_pairs(a) for a in turn.acts],
            )

    report = evaluate_tracker(small_corpus, GoldTracker())
    assert report.frame_identification == 1.0
    assert report.frame_creation == 1.0


def test_history_before_uses_stored_snapshots(small_corpus):
    d = small_corpus[0]
    store = history_before(d, 0)
    assert store.ids() == [1] and store.active == 1
    for i in range(1, len(d.turns)):
        store = history_before(d, i)
        assert store.ids() == [f.frame_id for f in d.turns[i - 1].frames]
        assert store.active == d.turns[i - 1].active_frame


# splits -------------------------------------------------------------------


def _corpus_with_users(user_counts: dict[str, int]):
    corpus = []
    for user, n in user_counts.items():
        for i in range(n):
            corpus.append(Dialogue(id=f"{user}-{i}", user_id=user, wizard_id="W", turns=[]))
    return corpus


def test_splits_ten_users():
    corpus = _corpus_with_users({f"U{i:02d}": 10 for i in range(10)})
    plan = make_splits(corpus, seed=0)
    assert len(plan.folds) == 10
    for fold in plan.folds:
        assert len(fold.test) == 10
        rest = 90
        assert len(fold.validation) == round(0.2 * rest)
        assert len(fold.train) == rest - len(fold.validation)
        assert not (set(fold.train) & set(fold.validation))
        assert not (set(fold.train) & set(fold.test))
        assert not (set(fold.validation) & set(fold.test))


def test_splits_partition_property():
    corpus = _corpus_with_users({f"U{i}": 3 + i for i in range(6)})
    plan = make_splits(corpus, seed=1)
    all_ids = {d.id for d in corpus}
    test_sets = [set(f.test) for f in plan.folds]
    assert set().union(*test_sets) == all_ids
    for i in range(len(test_sets)):
        for j in range(i + 1, len(test_sets)):
            assert not (test_sets[i] & test_sets[j])


def test_splits_deterministic():
    corpus = _corpus_with_users({f"U{i}": 5 for i in range(4)})
    assert make_splits(corpus, seed=3).to_dict() == make_splits(corpus, seed=3).to_dict()
    assert make_splits(corpus, seed=3).to_dict() != make_splits(corpus, seed=4).to_dict()


def test_splits_merge_low_volume_users():
    corpus = _corpus_with_users({"U21E41CQP": 2, "U23KPC9QV": 3, "UA": 4, "UB": 4})
    plan = make_splits(corpus, seed=0)
    assert len(plan.folds) == 3
    merged = next(f for f in plan.folds if "U21E41CQP" in f.held_out_user)
    assert len(merged.test) == 5


def test_splits_need_two_users():
    with pytest.raises(ValueError):
        make_splits(_corpus_with_users({"U": 5}), seed=0)


def test_fold_mean_std():
    mean, std = fold_mean_std([0.5, 0.7])
    assert mean == pytest.approx(0.6)
    assert std == pytest.approx(0.1414, abs=1e-3)


# stats ----------------------------------------------------------------------


def test_stats_empty_corpus():
    report = corpus_stats([])
    assert report.n_dialogues == 0 and report.n_turns == 0
    assert report.mean_turns == 0.0 and report.mean_frames == 0.0


def test_stats_hand_counted():
    def turn(author, acts_text, active, n_frames, ts):
        acts = parse_acts(acts_text)
        return Turn(
            author=author,
            text="x",
            acts=acts,
            acts_without_refs=[a.without_refs() for a in acts],
            active_frame=active,
            frames=[Frame(frame_id=i + 1) for i in range(n_frames)],
            timestamp=ts,
        )

    d1 = Dialogue(
        id="d1", user_id="U1", wizard_id="W1", user_survey_rating=5,
        turns=[
            turn("user", "greeting; inform(dst_city=A)", 1, 1, 0),
            turn("wizard", "offer(name=H, id=2)", 1, 2, 1),
            turn("user", "switch_frame(ref=[2{name=H}])", 2, 2, 2),
            turn("wizard", "", 2, 2, 3),
        ],
    )
    d2 = Dialogue(
        id="d2", user_id="U2", wizard_id="W1", user_survey_rating=4,
        turns=[
            turn("user", "inform(dst_city=B)", 1, 1, 0),
            turn("wizard", "no_result", 1, 1, 1),
        ],
    )
    report = corpus_stats([d1, d2])
    assert report.n_dialogues == 2
    assert report.n_turns == 6
    assert report.mean_turns == 3.0
    assert report.mean_frames == pytest.approx(1.5)  # (2 + 1) / 2
    assert report.mean_switches == pytest.approx(0.5)  # one switch in d1
    assert report.acts_per_turn == {0: 1, 1: 4, 2: 1}
    assert report.act_frequency["inform"] == 2
    assert report.act_frequency["greeting"] == 1
    assert report.rating_histogram == {4: 1, 5: 1}
    assert report.n_users == 2
    assert "dialogues" in report.format_table()


def test_report_dict_shape(small_corpus):
    report = evaluate_tracker(small_corpus[:5], RuleFrameTracker())
    payload = report.to_dict()
    assert set(payload) == {"frame_identification", "frame_creation", "n_pairs", "n_turns", "per_dialogue"}
    assert len(payload["per_dialogue"]) == 5

import json
import os

import pytest

from frametrack.corpus import (
    CorpusFormatError,
    CorpusParseError,
    dumps_corpus,
    load_corpus,
    loads_corpus,
    save_corpus,
)
from frametrack.grammar import parse_acts
from frametrack.model import Dialogue, Frame, SlotValue, Turn

DATA = os.path.join(os.path.dirname(__file__), "data")
GOLDEN = os.path.join(DATA, "golden_minimal.json")


def minimal_dialogue() -> Dialogue:
    acts = parse_acts("greeting; inform(dst_city=Atlantis, budget=1700)")
    frame = Frame(frame_id=1, constraints={"dst_city": [SlotValue("Atlantis")], "budget": [SlotValue("1700")]})
    turn = Turn(
        author="user",
        text="Hello ! I need a getaway to Atlantis within 1700 .",
        acts=acts,
        acts_without_refs=[a.without_refs() for a in acts],
        active_frame=1,
        frames=[frame],
        timestamp=1470000000000,
    )
    return Dialogue(id="mini-1", user_id="U00", wizard_id="W00", turns=[turn], user_survey_rating=5, wizard_task_successful=False)


def test_empty_corpus_round_trip(tmp_path):
    path = tmp_path / "empty.json"
    save_corpus([], path)
    assert load_corpus(path) == []


def test_round_trip_structural_equality(small_corpus, tmp_path):
    path = tmp_path / "corpus.json"
    save_corpus(small_corpus[:50], path)
    assert load_corpus(path) == small_corpus[:50]


def test_round_trip_byte_stability(small_corpus, tmp_path):
    for i, d in enumerate(small_corpus[:20]):
        path = tmp_path / f"c{i}.json"
        save_corpus([d], path)
        first = path.read_bytes()
        save_corpus(load_corpus(path), path)
        assert path.read_bytes() == first


def test_golden_minimal_file():
    assert dumps_corpus([minimal_dialogue()]) == open(GOLDEN, encoding="utf-8").read()


def test_exact_field_names(small_corpus):
    doc = json.loads(dumps_corpus(small_corpus[:1]))
    d = doc[0]
    assert set(d) == {"id", "user_id", "wizard_id", "labels", "turns"}
    turn = d["turns"][0]
    assert {"author", "text", "labels", "timestamp", "frames"} <= set(turn)
    assert {"active_frame", "acts", "acts_without_refs"} <= set(turn["labels"])
    frame = turn["frames"][0]
    assert set(frame) == {"frame_id", "frame_parent_id", "requests", "binary_questions", "compare_requests", "info"}
    db_turn = next(t for t in d["turns"] if "db" in t)
    assert "query" in db_turn["db"][0] and "results" in db_turn["db"][0]
    assert "userSurveyRating" in d["labels"] and "wizardSurveyTaskSuccessful" in d["labels"]


def test_unknown_extra_fields_preserved(tmp_path):
    doc = json.loads(dumps_corpus([minimal_dialogue()]))
    doc[0]["wozbot_revision"] = "r17"
    doc[0]["turns"][0]["latency_ms"] = 321
    doc[0]["turns"][0]["frames"][0]["annotator"] = "a3"
    path = tmp_path / "extra.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    corpus = load_corpus(path)
    assert corpus[0].extra["wozbot_revision"] == "r17"
    assert corpus[0].turns[0].extra["latency_ms"] == 321
    assert corpus[0].turns[0].frames[0].extra["annotator"] == "a3"
    out = tmp_path / "extra2.json"
    save_corpus(corpus, out)
    redone = json.loads(out.read_text(encoding="utf-8"))
    assert redone[0]["wozbot_revision"] == "r17"
    assert redone[0]["turns"][0]["latency_ms"] == 321
    assert redone[0]["turns"][0]["frames"][0]["annotator"] == "a3"


def test_parse_error_carries_byte_offset(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('[{"id": "x", ]', encoding="utf-8")
    with pytest.raises(CorpusParseError) as err:
        load_corpus(path)
    assert err.value.offset == 13


def test_schema_violation_names_location():
    doc = json.loads(dumps_corpus([minimal_dialogue()]))
    doc[0]["turns"][0]["timestamp"] = "yesterday"
    with pytest.raises(CorpusFormatError) as err:
        loads_corpus(json.dumps(doc))
    assert err.value.dialogue == "mini-1"
    assert err.value.turn == 0
    assert err.value.field == "timestamp"


def test_non_list_document_rejected():
    with pytest.raises(CorpusFormatError):
        loads_corpus('{"id": "x"}')


def test_strict_save_refuses_invalid():
    d = minimal_dialogue()
    d.turns[0].active_frame = 9
    with pytest.raises(CorpusFormatError):
        save_corpus([d], os.devnull)


def test_excerpt_dialogue_loads_with_expected_active_frames(tmp_path):
    from frametrack.engine import apply_turn, init_store

    script = [
        ("user", "greeting; inform(dst_city=Atlantis, or_city=Caprica, n_adults=8, budget=1700)",
         "Hi ! I need a getaway to Atlantis from Caprica for 8 adults within 1700 ."),
        ("wizard", "no_result", "I am sorry , nothing matches those constraints ."),
        ("user", "affirm; inform(dst_city=Neverland, n_adults=5, budget=1900)",
         "Yes , let us try Neverland for 5 adults within 1900 ."),
        ("wizard", "no_result", "Nothing available for those dates either ."),
    ]
    store = init_store()
    turns = []
    for i, (author, acts_text, text) in enumerate(script):
        acts = parse_acts(acts_text)
        store = apply_turn(store, author, acts)
        turns.append(
            Turn(
                author=author,
                text=text,
                acts=acts,
                acts_without_refs=[a.without_refs() for a in acts],
                active_frame=store.active,
                frames=[f.copy() for f in store.frames],
                timestamp=i,
            )
        )
    path = tmp_path / "excerpt.json"
    save_corpus([Dialogue(id="excerpt", user_id="U", wizard_id="W", turns=turns)], path)
    corpus = load_corpus(path)
    assert len(corpus) == 1
    [d] = corpus
    assert d.turns[0].active_frame == 1
    assert d.turns[2].active_frame == 2
    assert d.turns[2].frame_ids() == [1, 2]


def test_every_loaded_key_is_classified(small_corpus):
    from frametrack.inventory import classify_slot, is_known_act

    kinds = set()
    for d in small_corpus[:20]:
        for turn in d.turns:
            for a in turn.acts:
                assert is_known_act(a.name)
                for key, _ in a.args:
                    kinds.add(classify_slot(key))
    assert "unknown" not in kinds
    assert classify_slot("warp_speed") == "unknown"
    assert classify_slot("dst_city") == "searchable"
    assert classify_slot("gst_rating") == "displayed"
    assert classify_slot("intent") == "meta"


def test_negated_values_round_trip(tmp_path):
    d = minimal_dialogue()
    d.turns[0].frames[0].constraints["duration"] = [SlotValue("3", negated=True)]
    path = tmp_path / "neg.json"
    save_corpus([d], path)
    [loaded] = load_corpus(path)
    assert loaded.turns[0].frames[0].constraints["duration"] == [SlotValue("3", negated=True)]

import statistics

from frametrack.corpus import dumps_corpus
from frametrack.engine import check_replay
from frametrack.model import validate_dialogue
from frametrack.synth.simulate import SimulatorConfig, simulate_corpus, simulate_dialogue
from frametrack.synth.tasks import DEFAULT_TEMPLATES, instantiate_tasks


def test_fixed_seeds_give_identical_dialogues(small_db):
    [task] = instantiate_tasks(DEFAULT_TEMPLATES, small_db, 1, 1.0, seed=3)
    a = simulate_dialogue(task, small_db, seed=5, dialogue_id="d", user_id="U", wizard_id="W")
    b = simulate_dialogue(task, small_db, seed=5, dialogue_id="d", user_id="U", wizard_id="W")
    assert dumps_corpus([a]) == dumps_corpus([b])
    c = simulate_dialogue(task, small_db, seed=6, dialogue_id="d", user_id="U", wizard_id="W")
    assert dumps_corpus([a]) != dumps_corpus([c])


def test_every_dialogue_validates_and_replays(small_corpus):
    for d in small_corpus:
        assert validate_dialogue(d) == [], d.id
        assert check_replay(d) == [], d.id


def test_corpus_structure(small_corpus):
    assert len(small_corpus) == 60
    users = {d.user_id for d in small_corpus}
    assert len(users) == 10
    for d in small_corpus:
        assert d.turns[0].author == "user"
        assert d.user_survey_rating in (1, 2, 3, 4, 5)
        assert isinstance(d.wizard_task_successful, bool)
        timestamps = [t.timestamp for t in d.turns]
        assert timestamps == sorted(timestamps)


def test_corpus_exercises_tracker_relevant_acts(big_db):
    corpus = simulate_corpus(big_db, 120, seed=5)
    names = {a.name for d in corpus for t in d.turns for a in t.acts}
    assert {"inform", "offer", "switch_frame", "request_compare", "negate", "request"} <= names
    kinds = {r.kind for d in corpus for t in d.turns for a in t.acts for r in a.refs}
    assert {"ref", "read", "write"} <= kinds
    creations = sum(
        1
        for d in corpus
        for i, t in enumerate(d.turns)
        if t.author == "user" and len(t.frames) > (len(d.turns[i - 1].frames) if i else 1)
    )
    assert creations > 40


def test_mean_frames_inside_configured_band(big_db):
    corpus = simulate_corpus(big_db, 200, seed=5)
    mean_frames = statistics.fmean(len(d.turns[-1].frames) for d in corpus)
    assert 4.0 <= mean_frames <= 9.0


def test_config_round_trip(tmp_path):
    config = SimulatorConfig(p_switch=0.5, max_user_moves=4)
    path = tmp_path / "sim.cfg"
    config.save(path)
    assert SimulatorConfig.load(path) == config

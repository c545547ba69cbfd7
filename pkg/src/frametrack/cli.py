"""Command-line entry point.

Every command is deterministic under ``--seed``; human-readable reports go
to stdout and machine-readable JSON twins are written under ``--out`` when
given. Exit codes: 0 success, 1 validation or replay failures, 2 usage
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

from . import evaluation
from .corpus import load_corpus, save_corpus
from .engine import TraceEvent, check_replay
from .model import validate_dialogue
from .nlu.iob import dump_tagged, tag_corpus
from .nlu.tagger import TrainConfig, TrigramTagger, f1, train
from .synth.database import generate_database, load_database, save_database
from .synth.simulate import SimulatorConfig, simulate_corpus
from .synth.tasks import DEFAULT_TEMPLATES, instantiate_tasks
from .trackers import make_tracker


def _write_report(out_dir: str | None, name: str, payload) -> None:
    if not out_dir:
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fp:
        json.dump(payload, fp, ensure_ascii=False, indent=1)
        fp.write("\n")


def _cmd_stats(args) -> int:
    report = evaluation.corpus_stats(load_corpus(args.corpus))
    print(report.format_table())
    _write_report(args.out, "stats.json", report.to_dict())
    return 0


def _cmd_validate(args) -> int:
    corpus = load_corpus(args.corpus)
    n_violations = 0
    payload = []
    for d in corpus:
        violations = validate_dialogue(d)
        n_violations += len(violations)
        for v in violations:
            print(f"{d.id}: {v}")
            payload.append({"dialogue": d.id, "rule": v.rule, "turn": v.turn, "detail": v.detail})
    print(f"{len(corpus)} dialogues, {n_violations} violations")
    _write_report(args.out, "violations.json", payload)
    return 1 if n_violations else 0


def _cmd_replay(args) -> int:
    corpus = load_corpus(args.corpus)
    mismatched_turns = 0
    total_turns = 0
    payload = []
    for d in corpus:
        if args.trace:
            from .engine import replay

            events: list[TraceEvent] = []
            replay(d, events)
            for e in events:
                print(f"{d.id}: {e}")
        mismatches = check_replay(d)
        total_turns += len(d.turns)
        mismatched_turns += len({m.turn for m in mismatches})
        for m in mismatches:
            payload.append({"dialogue": d.id, "turn": m.turn, "kind": m.kind, "detail": m.detail})
            if args.verbose:
                print(f"{d.id} turn {m.turn}: {m.kind}: {m.detail}")
    ok = total_turns - mismatched_turns
    print(f"replayed {len(corpus)} dialogues: {ok}/{total_turns} turns match stored snapshots")
    _write_report(args.out, "replay.json", {"turns": total_turns, "matching": ok, "mismatches": payload})
    return 1 if mismatched_turns else 0


def _fit_tracker(name, seed, corpus):
    tracker = make_tracker(name, seed=seed)
    if name == "random":
        tracker.fit(corpus)
    return tracker


def _cmd_track(args) -> int:
    corpus = load_corpus(args.corpus)
    tracker = _fit_tracker(args.tracker, args.seed, corpus)
    payload = []
    for d_index, d in enumerate(corpus):
        tracker.begin_dialogue(d_index)
        for i, turn in enumerate(d.turns):
            if turn.author != "user":
                continue
            store = evaluation.history_before(d, i)
            pred = tracker.predict(store, list(turn.acts_without_refs), turn_index=i)
            payload.append(
                {
                    "dialogue": d.id,
                    "turn": i,
                    "creates_frame": pred.creates_frame,
                    "act_refs": [
                        [{"frame": p.frame, "key": p.key, "value": p.value} for p in pairs]
                        for pairs in pred.act_refs
                    ],
                }
            )
    print(f"tracked {len(payload)} user turns with the {args.tracker} tracker")
    _write_report(args.out, "predictions.json", payload)
    return 0


def _cmd_eval(args) -> int:
    corpus = load_corpus(args.corpus)
    tracker = _fit_tracker(args.tracker, args.seed, corpus)
    report = evaluation.evaluate_tracker(corpus, tracker, include_wizard_turns=args.include_wizard_turns)
    print(f"tracker              {args.tracker}")
    print(f"frame identification {report.frame_identification:.4f}  ({report.n_pairs} pairs)")
    print(f"frame creation       {report.frame_creation:.4f}  ({report.n_turns} turns)")
    if args.per_dialogue:
        for s in report.per_dialogue:
            print(f"  {s.dialogue_id}: identification {s.identification.fraction:.3f}, creation {s.creation.fraction:.3f}")
    payload = report.to_dict()
    if not args.per_dialogue:
        payload.pop("per_dialogue")
    _write_report(args.out, "eval.json", payload)
    failed = False
    if args.min_identification is not None and report.frame_identification < args.min_identification:
        print(f"FAIL: identification below threshold {args.min_identification}")
        failed = True
    if args.min_creation is not None and report.frame_creation < args.min_creation:
        print(f"FAIL: creation below threshold {args.min_creation}")
        failed = True
    return 1 if failed else 0


def _cmd_splits(args) -> int:
    corpus = load_corpus(args.corpus)
    plan = evaluation.make_splits(corpus, seed=args.seed)
    for fold in plan.folds:
        print(
            f"user {fold.held_out_user}: train {len(fold.train)}, "
            f"validation {len(fold.validation)}, test {len(fold.test)}"
        )
    _write_report(args.out, "splits.json", plan.to_dict())
    return 0


def _cmd_gen_db(args) -> int:
    db = generate_database(args.seed, args.n)
    path = args.db or os.path.join(args.out or ".", "db.json")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    save_database(db, path)
    print(f"wrote {len(db)} packages to {path}")
    return 0


def _cmd_gen_tasks(args) -> int:
    db = load_database(args.db) if args.db else generate_database(args.db_seed, args.db_size)
    tasks = instantiate_tasks(DEFAULT_TEMPLATES, db, args.n, args.p, args.seed)
    for t in tasks:
        print(("OK  " if t.expected_success else "FAIL") + " " + t.instruction)
    _write_report(
        args.out,
        "tasks.json",
        [
            {
                "template": t.template_id,
                "bindings": t.bindings,
                "query": t.query.to_dict(),
                "expected_success": t.expected_success,
                "instruction": t.instruction,
                "fallback": t.fallback,
            }
            for t in tasks
        ],
    )
    return 0


def _cmd_gen_corpus(args) -> int:
    db = load_database(args.db) if args.db else generate_database(args.db_seed, args.db_size)
    config = SimulatorConfig.load(args.config) if args.config else SimulatorConfig()
    corpus = simulate_corpus(db, args.n, args.seed, config)
    path = args.corpus or os.path.join(args.out or ".", "corpus.json")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    save_corpus(corpus, path)
    print(f"wrote {len(corpus)} dialogues to {path}")
    return 0


def _cmd_nlu_derive(args) -> int:
    corpus = load_corpus(args.corpus)
    tagged = tag_corpus(corpus)
    text = dump_tagged(tagged)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "tagged.tsv")
        with open(path, "w", encoding="utf-8") as fp:
            fp.write(text)
        print(f"wrote {len(tagged)} tagged utterances to {path}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_nlu_train(args) -> int:
    corpus = load_corpus(args.corpus)
    tagged = tag_corpus(corpus)
    config = TrainConfig(dim=args.dim, lr=args.lr, epochs=args.epochs, batch_size=args.batch_size, seed=args.seed)
    tagger = train(config, tagged)
    tagger.save(args.model)
    print(f"trained on {len(tagged)} utterances; final epoch loss {tagger.loss_history_[-1]:.3f}")
    print(f"saved model to {args.model}")
    return 0


def _evaluate_tagger(tagger: TrigramTagger, tagged) -> tuple:
    gold_acts, pred_acts, gold_slots, pred_slots = [], [], [], []
    for utt in tagged:
        pa, ps = tagger.predict(utt.words)
        gold_acts.extend(utt.act_tags)
        pred_acts.extend(pa)
        gold_slots.extend(utt.slot_tags)
        pred_slots.extend(ps)
    return f1(gold_acts, pred_acts), f1(gold_slots, pred_slots)


def _cmd_nlu_eval(args) -> int:
    corpus = load_corpus(args.corpus)
    if args.model:
        tagger = TrigramTagger.load(args.model)
        act_f1, slot_f1 = _evaluate_tagger(tagger, tag_corpus(corpus))
        print(f"act F1  {act_f1.f1:.4f}   slot F1 {slot_f1.f1:.4f}")
        _write_report(args.out, "nlu_eval.json", {"act_f1": act_f1.f1, "slot_f1": slot_f1.f1})
        return 0
    # leave-one-user-out protocol
    plan = evaluation.make_splits(corpus, seed=args.seed)
    if args.folds:
        plan.folds = plan.folds[: args.folds]
    by_id = {d.id: d for d in corpus}
    config = TrainConfig(dim=args.dim, lr=args.lr, epochs=args.epochs, batch_size=args.batch_size, seed=args.seed)
    act_scores, slot_scores, rows = [], [], []
    for fold in plan.folds:
        tagged_train = tag_corpus([by_id[i] for i in fold.train])
        tagged_test = tag_corpus([by_id[i] for i in fold.test])
        tagger = train(config, tagged_train)
        act_f1, slot_f1 = _evaluate_tagger(tagger, tagged_test)
        act_scores.append(act_f1.f1)
        slot_scores.append(slot_f1.f1)
        rows.append({"held_out_user": fold.held_out_user, "act_f1": act_f1.f1, "slot_f1": slot_f1.f1})
        print(f"fold {fold.held_out_user}: act F1 {act_f1.f1:.4f}, slot F1 {slot_f1.f1:.4f}")
    act_mean, act_std = evaluation.fold_mean_std(act_scores)
    slot_mean, slot_std = evaluation.fold_mean_std(slot_scores)
    print(f"act F1  {act_mean:.4f} +/- {act_std:.4f}")
    print(f"slot F1 {slot_mean:.4f} +/- {slot_std:.4f}")
    _write_report(
        args.out,
        "nlu_eval.json",
        {"folds": rows, "act_f1": [act_mean, act_std], "slot_f1": [slot_mean, slot_std], "config": asdict(config)},
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frametrack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True):
        if corpus:
            p.add_argument("--corpus", required=True, help="corpus JSON file")
        p.add_argument("--out", help="directory for machine-readable reports")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("stats", help="corpus statistics")
    common(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("validate", help="check corpus invariants")
    common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("replay", help="replay gold acts and compare snapshots")
    common(p)
    p.add_argument("--trace", action="store_true", help="print one line per applied rule")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("track", help="dump tracker predictions")
    common(p)
    p.add_argument("--tracker", choices=("rule", "random", "current"), default="rule")
    p.set_defaults(func=_cmd_track)

    p = sub.add_parser("eval", help="score a tracker against gold labels")
    common(p)
    p.add_argument("--tracker", choices=("rule", "random", "current"), default="rule")
    p.add_argument("--include-wizard-turns", action="store_true")
    p.add_argument("--per-dialogue", action="store_true")
    p.add_argument("--min-identification", type=float, help="exit 1 below this fraction")
    p.add_argument("--min-creation", type=float, help="exit 1 below this fraction")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("splits", help="leave-one-user-out split plan")
    common(p)
    p.set_defaults(func=_cmd_splits)

    p = sub.add_parser("gen-db", help="generate a package database")
    common(p, corpus=False)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--db", help="output path (default <out>/db.json)")
    p.set_defaults(func=_cmd_gen_db)

    p = sub.add_parser("gen-tasks", help="instantiate task templates")
    common(p, corpus=False)
    p.add_argument("--db", help="database JSON (generated if omitted)")
    p.add_argument("--db-seed", type=int, default=1)
    p.add_argument("--db-size", type=int, default=500)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--p", type=float, default=0.5, help="target success rate")
    p.set_defaults(func=_cmd_gen_tasks)

    p = sub.add_parser("gen-corpus", help="simulate an annotated corpus")
    common(p, corpus=False)
    p.add_argument("--db", help="database JSON (generated if omitted)")
    p.add_argument("--db-seed", type=int, default=1)
    p.add_argument("--db-size", type=int, default=500)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--corpus", help="output path (default <out>/corpus.json)")
    p.add_argument("--config", help="simulator config file")
    p.set_defaults(func=_cmd_gen_corpus)

    p = sub.add_parser("nlu-derive", help="derive the word-level IOB corpus")
    common(p)
    p.set_defaults(func=_cmd_nlu_derive)

    def nlu_common(p):
        p.add_argument("--dim", type=int, default=64)
        p.add_argument("--lr", type=float, default=0.01)
        p.add_argument("--epochs", type=int, default=12)
        p.add_argument("--batch-size", type=int, default=32)

    p = sub.add_parser("nlu-train", help="train the trigram tagger")
    common(p)
    p.add_argument("--model", required=True, help="checkpoint output path (.npz)")
    nlu_common(p)
    p.set_defaults(func=_cmd_nlu_train)

    p = sub.add_parser("nlu-eval", help="evaluate the tagger (leave-one-user-out without --model)")
    common(p)
    p.add_argument("--model", help="evaluate an existing checkpoint instead")
    p.add_argument("--folds", type=int, help="run only the first N folds")
    nlu_common(p)
    p.set_defaults(func=_cmd_nlu_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Acceptance suite: one test per exit criterion, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS/FAIL
lines. The adapter-contract criterion lives in the adapter package's own
suite (adapter/tests/test_adapter.py), since it exercises that package.
"""

import itertools
import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

import oracles
import treebank
from conftest import DATA, GOLDEN
from igpipe.classifier import StatementType, evaluate_classifier, fit, predict
from igpipe.evaluation import evaluate_tagger
from igpipe.hypergraph import GraphMode, build_hypergraph
from igpipe.lexicon import load_lexicon
from igpipe.mentions import MentionClass, extract_all_mentions, extract_mentions
from igpipe.metrics import (
    SimpleGraph,
    closeness,
    closeness_map,
    metrics_table,
    rank_comparison,
    visibility,
)
from igpipe.tagger import IGTag, tag_constitutive, tag_regulative
from test_classifier import stratified_split, synthetic_corpus
from test_entities import mk_mention
from test_evaluation import rec as eval_record
from test_metrics import _exhaustive_graphs, _oracle_for, named_graph


@contextmanager
def criterion(cid: str, description: str):
    try:
        yield
    except Exception:
        print(f"[FAIL] {cid}: {description}")
        raise
    print(f"[PASS] {cid}: {description}")


@pytest.fixture(scope="module")
def bundled_model():
    from igpipe.cli import _read_training_csv

    return fit(_read_training_csv(DATA / "train.csv"), k=70, seed=13)


@pytest.fixture(scope="module")
def lexicon():
    return load_lexicon(DATA / "lexicon.csv")


@pytest.fixture(scope="module")
def mini_records(bundled_model, lexicon):
    from igpipe.tagger import tag_statement

    records = []
    for stmt in treebank.mini_statements():
        stype, _ = predict(bundled_model, stmt)
        records.append(tag_statement(stmt, stype, lexicon).record)
    return records


def test_ac1_constitutive_worked_example():
    with criterion(
        "AC1", "constitutive walkthrough tags the copular example exactly, <1s"
    ):
        start = time.perf_counter()
        ann = tag_constitutive(treebank.employee_unable())
        elapsed = time.perf_counter() - start
        want = {
            "the": IGTag.CONSTITUTED_ENTITY,
            "employee": IGTag.CONSTITUTED_ENTITY,
            "is": IGTag.CONSTITUTIVE_FUNCTION,
            "unable": IGTag.CONSTITUTING_PROPERTIES,
            "to": IGTag.CONTEXT,
            "work": IGTag.CONTEXT,
        }
        got = {t.form: tag for t, tag in zip(ann.statement.tokens, ann.tags)}
        assert got == want
        assert elapsed < 1.0


def test_ac2_regulative_worked_example(lexicon):
    with criterion(
        "AC2", "regulative walkthrough: A/D/I, objects and both context phrases"
    ):
        stmt = treebank.state_party_submit()
        ann = tag_regulative(stmt, lexicon)
        got = {t.id: tag for t, tag in zip(stmt.tokens, ann.tags)}
        assert [got[i] for i in (5, 6, 7)] == [IGTag.ATTRIBUTE] * 3  # each State Party
        assert got[8] is IGTag.DEONTIC  # may
        assert got[9] is IGTag.AIM  # submit
        assert got[11] is IGTag.DIRECT_OBJECT  # request
        assert got[17] is IGTag.INDIRECT_OBJECT  # Committee
        assert [got[i] for i in (1, 2, 3)] == [IGTag.CONTEXT] * 3  # Once a year
        assert [got[i] for i in (18, 19, 20, 21)] == [IGTag.CONTEXT] * 4

        mentions = extract_mentions(ann, lexicon)
        classes = {m.entity: m.mention_class for m in mentions}
        assert classes["State Party"] is MentionClass.ATTRIBUTE_OR_ENTITY
        assert classes["request"] is MentionClass.OBJECT_OR_PROPERTY
        assert classes["Committee"] is MentionClass.INDIRECT_OBJECT


def test_ac3_visibility_formula(mini_records, lexicon):
    with criterion(
        "AC3", "visibility equals the brute-force oracle on the mini-corpus and 3.2 case"
    ):
        mentions = extract_all_mentions(mini_records, lexicon)
        n = len(mini_records)
        assert n == oracles.MINI_N_STATEMENTS
        want = oracles.mini_visibility()
        for entity, expected in want.items():
            assert visibility(entity, mentions, n) == expected, entity
        # the derived five-statement case: (6*2 + 4*1)/5
        five = [
            mk_mention("Committee", "s1", 6),
            mk_mention("Committee", "s2", 6),
            mk_mention("Committee", "s3", 4),
        ]
        assert visibility("Committee", five, 5) == 3.2


def test_ac4_closeness_oracle_equivalence():
    with criterion(
        "AC4", "closeness matches all-pairs brute force on >=10000 graphs up to n=8"
    ):
        checked = 0
        for n, edges in _exhaustive_graphs(5):
            g = named_graph(n, edges)
            assert closeness_map(g) == _oracle_for(g)
            checked += 1
        rng = random.Random(20_2025)
        for n in (6, 7, 8):
            slots = list(itertools.combinations(range(n), 2))
            for p in (0.1, 0.3, 0.5, 0.8):
                for _ in range(750):
                    edges = [e for e in slots if rng.random() < p]
                    g = named_graph(n, edges)
                    assert closeness_map(g) == _oracle_for(g)
                    checked += 1
        assert checked >= 10_000
        star = named_graph(5, [(0, i) for i in range(1, 5)])
        assert closeness(star, "v1") == 4 / 7
        path = named_graph(3, [(0, 1), (1, 2)])
        assert closeness(path, "v0") == 2 / 3


def test_ac5_classifier_threshold_and_determinism():
    with criterion(
        "AC5", "held-out F1 >= 0.90 on the 40-statement synthetic corpus; "
        "training is byte-deterministic"
    ):
        corpus = synthetic_corpus(20, seed=13)
        assert len(corpus) == 40
        train, test = stratified_split(corpus)
        model = fit(train, k=20, seed=13)
        report = evaluate_classifier(model, test)
        assert report["macro"]["f1"] >= 0.90
        again = fit(train, k=20, seed=13)
        assert model.to_json().encode() == again.to_json().encode()


def test_ac6_direction_check(mini_records, lexicon):
    with criterion(
        "AC6", "entity with most Attribute slots ranks first on visibility "
        "and centrality"
    ):
        mentions = extract_all_mentions(mini_records, lexicon)
        n = len(mini_records)
        h = build_hypergraph(mentions, GraphMode.ACTORS_AND_OBJECTS, lexicon)
        rows = metrics_table(h, mentions, n, lexicon)
        ranks = rank_comparison(rows)

        # count statements in which an entity occupies the top slot (class 6)
        top_counts: dict[str, set] = {}
        for m in mentions:
            if m.mention_class is MentionClass.ATTRIBUTE_OR_ENTITY:
                top_counts.setdefault(m.entity, set()).add(m.statement_ref)
        most_attribute = max(top_counts, key=lambda e: len(top_counts[e]))
        assert most_attribute == "State Party"
        assert len(top_counts["State Party"]) == 2

        by_entity = {r.entity: r for r in ranks}
        assert by_entity[most_attribute].visibility_rank == 1
        assert by_entity[most_attribute].centrality_rank == 1
        # and uniquely so on both measures
        assert [r.entity for r in ranks if r.visibility_rank == 1] == [most_attribute]
        assert [r.entity for r in ranks if r.centrality_rank == 1] == [most_attribute]


def test_ac7_pipeline_determinism_and_golden(tmp_path, bundled_model):
    with criterion(
        "AC7", "report twice: byte-identical bundles (timestamps excluded), "
        "golden match, <10s"
    ):
        model_path = tmp_path / "model.json"
        bundled_model.save(model_path)
        assert model_path.read_bytes() == (GOLDEN / "model.json").read_bytes()

        start = time.perf_counter()
        outs = []
        for name in ("one", "two"):
            out = tmp_path / name
            proc = subprocess.run(
                [
                    sys.executable, "-m", "igpipe", "report",
                    "--in", str(DATA / "minicorpus"),
                    "--model", str(model_path),
                    "--lexicon", str(DATA / "lexicon.csv"),
                    "--mode", "actors-objects",
                    "--seed", "13",
                    "--out", str(out),
                ],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stderr
            outs.append(out)
        elapsed = time.perf_counter() - start

        content_files = [
            "annotations.igjsonl", "hypergraph.graphml", "hypergraph.dot",
            "hypergraph.json", "isolated.csv", "metrics.csv", "ranks.csv",
            "histogram.csv", "scatter.json",
        ]
        for name in content_files:
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
            assert (outs[0] / name).read_bytes() == (GOLDEN / name).read_bytes(), name
        manifests = [
            json.loads((out / "manifest.json").read_text()) for out in outs
        ]
        for m in manifests:
            m.pop("created_at")
        assert manifests[0] == manifests[1]
        assert elapsed < 10.0


def test_ac8_tagger_evaluation_harness():
    with criterion(
        "AC8", "injected Attribute error scores precision 0.75; perfect input 1.0"
    ):
        A, I, C, U = IGTag.ATTRIBUTE, IGTag.AIM, IGTag.CONTEXT, IGTag.UNTAGGED
        gold = [
            eval_record("s1", [A, A, I, U]),
            eval_record("s2", [A, U, I, C]),
        ]
        pred = [
            eval_record("s1", [A, A, I, U]),
            eval_record("s2", [A, A, I, C]),
        ]
        report = evaluate_tagger(pred, gold)
        row = report.row("regulative", "Attribute")
        assert row.precision == 0.75

        perfect = evaluate_tagger(gold, gold)
        for r in perfect.rows:
            if r.support:
                assert r.precision == r.recall == r.f1 == 1.0
        assert all(o.macro_f1 == 1.0 for o in perfect.overall)

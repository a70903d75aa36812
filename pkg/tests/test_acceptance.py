"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

The dataset-dependent checks use the released corpus when the
``ARGMINE_DATASET`` environment variable points at its JSONL file and fall
back to the bundled fixture corpus with oracle-computed targets otherwise.
"""

import json
import os
import random
import sys
import time

from argmine import assets
from argmine.agreement import TABLE_CATEGORIES, agreement_report, cohen_kappa, harmonize_spans
from argmine.corpus_io import read_jsonl, write_jsonl
from argmine.experiments import make_partitions, subsample_train
from argmine.metrics import MACRO, PER_CLASS, sequence_prf, token_prf
from argmine.model import Language, tokenize
from argmine.normalize import normalize_text, project_span
from argmine.standoff import parse_standoff, write_standoff
from argmine.stats import corpus_stats

from fixtures import fixture_corpus, synthetic_sized_corpus

_SUITE_START = time.perf_counter()


def report(name: str, ok: bool = True) -> None:
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'}: {name}")
    assert ok


def oracle_kappa(a, b):
    labels = sorted(set(a) | set(b), key=repr)
    n = len(a)
    table = {(x, y): 0 for x in labels for y in labels}
    for x, y in zip(a, b):
        table[(x, y)] += 1
    p_o = sum(table[(x, x)] for x in labels) / n
    p_e = sum(
        (sum(table[(x, y)] for y in labels) / n)
        * (sum(table[(y, x)] for y in labels) / n)
        for x in labels
    )
    return None if p_e == 1.0 else (p_o - p_e) / (1 - p_e)


def test_kappa_oracle_equivalence():
    """1,000 random pairs, domains of size 2 and 3, within 1e-12, < 1 s."""
    rng = random.Random(2024)
    started = time.perf_counter()
    for i in range(1000):
        domain = (0, 1) if i % 2 == 0 else (0, 1, 2)
        n = rng.randint(1, 40)
        a = [rng.choice(domain) for _ in range(n)]
        b = [rng.choice(domain) for _ in range(n)]
        expected = oracle_kappa(a, b)
        actual = cohen_kappa(a, b, domain)
        if expected is None:
            assert actual is None
        else:
            assert abs(actual - expected) <= 1e-12, (a, b)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"kappa oracle loop took {elapsed:.2f}s"
    report("kappa matches brute-force oracle on 1000 pairs within 1e-12")


def test_harmonization_worked_example_and_idempotence():
    text = "Look at the damage illegals do to our towns"
    words = [t.text for t in tokenize(text)]
    mask_a = [w in ("the", "damage", "illegals", "do") for w in words]
    mask_b = [w == "damage" for w in words]
    out_a, out_b, matched = harmonize_spans(mask_a, mask_b)
    assert matched
    assert out_a == out_b == mask_b and sum(out_a) == 1

    rng = random.Random(77)
    for _ in range(1000):
        n = rng.randint(1, 24)
        mask_a = [rng.random() < 0.4 for _ in range(n)]
        mask_b = [rng.random() < 0.4 for _ in range(n)]
        once = harmonize_spans(mask_a, mask_b)
        twice = harmonize_spans(once[0], once[1])
        assert (twice[0], twice[1]) == (once[0], once[1])
    report("harmonization reproduces the worked example and is idempotent")


def test_prf_oracle_equivalence():
    def oracle(gold, pred, positive):
        tp = sum(1 for g, p in zip(gold, pred) if g == positive and p == positive)
        fp = sum(1 for g, p in zip(gold, pred) if g != positive and p == positive)
        fn = sum(1 for g, p in zip(gold, pred) if g == positive and p != positive)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return precision, recall, f1

    rng = random.Random(404)
    for i in range(1000):
        n = rng.randint(1, 40)
        if i % 2 == 0:
            gold = [rng.random() < 0.4 for _ in range(n)]
            pred = [rng.random() < 0.4 for _ in range(n)]
            result = token_prf(gold, pred)
            p, r, f = oracle(gold, pred, True)
            assert abs(result.precision - p) <= 1e-12
            assert abs(result.recall - r) <= 1e-12
            assert abs(result.f1 - f) <= 1e-12
        else:
            domain = ("F", "V", "P")
            gold = [rng.choice(domain) for _ in range(n)]
            pred = [rng.choice(domain) for _ in range(n)]
            per_class = sequence_prf(gold, pred, domain, PER_CLASS)
            macro = sequence_prf(gold, pred, domain, MACRO)
            expected = [oracle(gold, pred, c) for c in domain]
            for cls, (p, r, f) in zip(domain, expected):
                assert abs(per_class[cls].f1 - f) <= 1e-12
            assert abs(macro.f1 - sum(e[2] for e in expected) / 3) <= 1e-12
    report("token and sequence PRF match confusion-matrix oracle on 1000 instances")


def test_round_trips_on_fixture_corpus():
    corpus = fixture_corpus()
    assert len(corpus.tweets) >= 30
    assert corpus.by_language(Language.EN) and corpus.by_language(Language.ES)
    # every component appears somewhere, discontinuous spans included
    layer = corpus.layer("ann1")
    seen_discontinuous = False
    components = set()
    for tweet in corpus.tweets:
        annotation = layer.get(tweet.id)
        for name, span in annotation.components().items():
            if span is not None:
                components.add(name)
                seen_discontinuous |= len(span.fragments) > 1
    assert components == {
        "justification", "conclusion", "collective", "property",
        "pivot_just_side", "pivot_conc_side",
    }
    assert seen_discontinuous

    for layer in corpus.layers:
        for tweet in corpus.tweets:
            annotation = layer.get(tweet.id)
            if annotation is None:
                continue
            ann_content, txt_content = write_standoff(tweet, annotation)
            back_tweet, back_annotation = parse_standoff(
                ann_content, txt_content, tweet.id, tweet.language, tweet.source_flags
            )
            assert (back_tweet, back_annotation) == (tweet, annotation)
    assert read_jsonl(write_jsonl(corpus)) == corpus
    report("standoff and JSONL round-trips are identities on the fixture corpus")


def test_normalizer_idempotence_and_projection():
    lexicon = assets.default_lexicon(Language.EN)
    table = assets.default_emoji_table()

    exact = normalize_text("@user #BuildTheWall", lexicon, table)
    assert exact.text == "@usuario hashtag build the wall"

    rng = random.Random(10_000)
    pieces = [
        "@user", "@John_Doe", "#BuildTheWall", "#stoptheinvasion", "#zzz", "#ok",
        "\U0001F525", "\U0001F602", "☕", "wall", "words", "no!!!!!",
        "soooooo", "a@b.com", " ", "  ", ".", "@", "#", "!", "x",
    ]
    for _ in range(10_000):
        text = "".join(rng.choice(pieces) for _ in range(rng.randint(0, 8)))
        once = normalize_text(text, lexicon, table)
        again = normalize_text(once.text, lexicon, table)
        assert again.text == once.text, repr(text)

    corpus = fixture_corpus()
    for layer in corpus.layers:
        for tweet in corpus.tweets:
            annotation = layer.get(tweet.id)
            if annotation is None:
                continue
            nm = normalize_text(
                tweet.text, assets.default_lexicon(tweet.language), table
            )
            for name, span in annotation.components().items():
                if span is None:
                    continue
                projected = project_span(span, nm)
                assert projected.fragments, (tweet.id, name)
    report(
        "normalizer idempotent on 10000 strings; projection non-empty; "
        "exact composite output"
    )


def test_manifest_sizes_nesting_determinism():
    corpus = synthetic_sized_corpus()
    expected = {
        "mono-en": (770, 100, 100),
        "mix": (890, 126, 150),
        "cross-lingual": (850, 120, 196),
    }
    for scheme, sizes in expected.items():
        manifest = make_partitions(corpus, scheme, "argumentative", seed=7)
        assert (len(manifest.train), len(manifest.dev), len(manifest.test)) == sizes
        again = make_partitions(corpus, scheme, "argumentative", seed=7)
        assert manifest == again

    manifest = make_partitions(corpus, "mono-en", "argumentative", seed=7)
    previous = None
    for fraction in (0.25, 0.5, 0.75, 1.0):
        sub = subsample_train(manifest, fraction)
        expected_size = int(fraction * 770 + 0.5)
        assert len(sub.train) == expected_size
        if previous is not None:
            assert set(previous) <= set(sub.train)
        previous = sub.train
    mix = make_partitions(corpus, "mix", "argumentative", seed=9)
    es_test = [i for i in mix.test if i.startswith("es")]
    assert len(es_test) == 50
    report("manifests match the fixed split sizes, nest fractions, and are seed-stable")


def _released_corpus():
    path = os.environ.get("ARGMINE_DATASET")
    if not path or not os.path.isfile(path):
        return None
    with open(path, encoding="utf-8") as handle:
        return read_jsonl(handle)


def test_dataset_stats_and_agreement():
    released = _released_corpus()
    if released is not None:
        en = released.by_language(Language.EN)
        es = released.by_language(Language.ES)
        assert (len(en), len(es)) == (970, 196)
        layer = released.layers[0]
        stats = corpus_stats(released, layer)
        expected = {
            "en": (25.3, 58.2, 45.1),
            "es": (26.5, 61.1, 37.5),
        }
        for lang, (non_arg, pair, pivot) in expected.items():
            got = stats.languages[lang]
            assert abs(got.pct_non_argumentative - non_arg) <= 0.5
            assert abs(got.pct_with_collective_property_pair - pair) <= 0.5
            assert abs(got.pct_with_pivot - pivot) <= 0.5
        types = {
            ("en", "justification_types"): (93, 4, 3),
            ("en", "conclusion_types"): (37, 57, 6),
            ("es", "justification_types"): (97, 2, 1),
            ("es", "conclusion_types"): (56, 28, 16),
        }
        for (lang, field), (f, p, v) in types.items():
            dist = getattr(stats.languages[lang], field)
            assert abs(dist["fact"] - f) <= 0.5
            assert abs(dist["policy"] - p) <= 0.5
            assert abs(dist["value"] - v) <= 0.5
        if len(released.layers) >= 2:
            rep = agreement_report(released, released.layers[0], released.layers[1])
            table1 = dict(
                zip(
                    TABLE_CATEGORIES,
                    (0.85, 0.64, 0.60, 0.52, 0.62, 0.64, 0.60, -0.03),
                )
            )
            for category, expected_kappa in table1.items():
                assert abs(rep.kappa[category] - expected_kappa) <= 0.02, category
        report("released corpus reproduces the published statistics and agreement")
        return

    # fixture path: oracle-computed targets
    corpus = fixture_corpus()
    layer = corpus.layer("ann1")
    stats = corpus_stats(corpus, layer)
    for language in (Language.EN, Language.ES):
        tweets = corpus.by_language(language)
        annotations = [layer.get(t.id) for t in tweets]
        non_arg = 100 * sum(1 for a in annotations if not a.argumentative) / len(tweets)
        pair = 100 * sum(1 for a in annotations if a.collective and a.property) / len(tweets)
        pivot = 100 * sum(1 for a in annotations if a.pivot) / len(tweets)
        got = stats.languages[language.value]
        assert abs(got.pct_non_argumentative - non_arg) <= 1e-9
        assert abs(got.pct_with_collective_property_pair - pair) <= 1e-9
        assert abs(got.pct_with_pivot - pivot) <= 1e-9

    rep = agreement_report(corpus, corpus.layer("ann1"), corpus.layer("ann2"))
    frozen = {
        "argumentative": 0.8461538462,
        "collective": 0.9040074557,
        "property": 0.9012464046,
        "pivot": 0.5198135198,
        "justification": 0.9217580033,
        "conclusion": 0.8616985566,
        "type_of_conclusion": 0.8103448276,
        "type_of_justification": 0.6333333333,
    }
    for category, expected_kappa in frozen.items():
        assert abs(rep.kappa[category] - expected_kappa) <= 1e-9, category
    report(
        "released corpus absent: synthetic fixture matches oracle-computed "
        "stats and agreement targets"
    )


def test_primary_suite_standalone_and_fast():
    """No trainer code loaded; fixture predictions only; suite under 60 s."""
    assert "argmine_trainer" not in sys.modules
    assert "torch" not in sys.modules
    assert "transformers" not in sys.modules

    # score a fixture prediction file end to end without any trained model
    from argmine.experiments import ExperimentManifest, hyper_grid, score_predictions

    corpus = fixture_corpus()
    manifest = ExperimentManifest(
        scheme="mono-en",
        task="collective",
        seed=1,
        fraction=1.0,
        train=("en01", "en02", "en05"),
        dev=("en07",),
        test=("en06", "en08"),
        grid=hyper_grid("collective"),
    )
    from argmine.experiments import task_instances

    gold = task_instances(corpus, corpus.layer("ann1"), manifest)["test"]
    blocks, block_id, labels = {}, None, []
    for line in gold.splitlines() + [""]:
        if line.startswith("# id="):
            block_id, labels = line[len("# id="):], []
        elif line.strip():
            labels.append(line.split("\t")[1])
        elif block_id is not None:
            blocks[block_id] = labels
            block_id = None
    predictions = "\n".join(
        json.dumps({"id": i, "labels": l}) for i, l in blocks.items()
    )
    run = score_predictions(corpus, corpus.layer("ann1"), manifest, predictions)
    assert run.prf.f1 == 1.0

    elapsed = time.perf_counter() - _SUITE_START
    assert elapsed < 60.0, f"acceptance module took {elapsed:.1f}s"
    report(f"primary suite runs trainer-free ({elapsed:.1f}s elapsed)")

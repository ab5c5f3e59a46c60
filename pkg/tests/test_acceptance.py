"""End-to-end acceptance checks, one test per criterion.

Each test appends a ``PASS``/``FAIL`` line to the summary printed at the
end of the pytest run (``pytest tests/test_acceptance.py -v``).
"""

import hashlib
import math
import random
import time

import pytest

from alblid.classifiers import cfa_score, classify, cosine_score, nb_log_posterior, out_of_place_distance
from alblid.corpus import Excerpt, StripAll, StripHalf, dumps_articles, make_variant, texts_by_language
from alblid.evaluation import evaluate, render_report
from alblid.profiles import ModelConfig, RankedProfile, dumps_model_set, train_model_set
from conftest import ACCEPTANCE_RESULTS

pytestmark = pytest.mark.acceptance

PERTURB_SEED = 11
LONG_CHARS = 300
TITLE_CHARS = 80


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
    ACCEPTANCE_RESULTS.append(line)
    print(line)
    assert ok, line


def accuracy(models, docs, field, method):
    correct = sum(classify(getattr(d, field), models, method).language == d.language for d in docs)
    return correct / len(docs)


@pytest.fixture(scope="module")
def long_docs(split):
    return split[1].filter(lambda d: len(d.content) >= LONG_CHARS)


@pytest.fixture(scope="module")
def sq_titles(split):
    return split[1].filter(lambda d: d.language == "sq" and 0 < len(d.title) <= TITLE_CHARS)


@pytest.fixture(scope="module")
def perturbed_models(split):
    texts, domains = texts_by_language(make_variant(split[0], StripHalf(PERTURB_SEED, 0.5)))
    return train_model_set(texts, ModelConfig(), domains)


def test_1_rank_order_oracle():
    rng = random.Random(1)
    vocabulary = [f"g{i}" for i in range(120)]
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        doc = rng.sample(vocabulary, rng.randint(1, 50))
        lang = rng.sample(vocabulary, rng.randint(1, 50))
        expected = 0
        for i, gram in enumerate(doc):
            for j, other in enumerate(lang):
                if gram == other:
                    expected += abs(i - j)
                    break
            else:
                expected += len(lang)
        if out_of_place_distance(RankedProfile.from_ngrams(doc), RankedProfile.from_ngrams(lang)) != expected:
            mismatches += 1
    elapsed = time.perf_counter() - start
    record(1, mismatches == 0 and elapsed < 5,
           f"out-of-place distance vs double-loop oracle, 1000 pairs, {mismatches} mismatches, {elapsed:.2f}s")


def hand_nb(doc, training_docs, alpha, n_languages):
    """Smoothed multinomial log posterior from raw characters, uniform prior."""
    def unigrams(texts):
        counts = {}
        for text in texts:
            for word in text.split():
                for ch in "_" + word + "_":
                    counts[ch] = counts.get(ch, 0) + 1
        return counts

    train = unigrams(training_docs)
    total, vocab = sum(train.values()), len(train)
    score = math.log(1 / n_languages)
    for gram, count in unigrams([doc]).items():
        score += count * math.log((train.get(gram, 0) + alpha) / (total + alpha * (vocab + 1)))
    return score


def test_2_naive_bayes_oracle():
    rng = random.Random(2)
    start = time.perf_counter()
    worst, argmax_mismatches = 0.0, 0

    def text(alphabet):
        return " ".join("".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
                        for _ in range(rng.randint(1, 8)))

    for _ in range(200):
        letters = rng.sample("abcdefghi", rng.randint(2, 9))  # with "_" at most 10 events
        alpha = rng.choice([1.0, 0.5, 0.1])
        config = ModelConfig(ngram_min=1, ngram_max=1, rank_min=1, rank_max=1, alpha=alpha)
        corpora = {"L1": [text(letters[: len(letters) // 2 + 1]) for _ in range(rng.randint(1, 4))],
                   "L2": [text(letters[len(letters) // 2:]) for _ in range(rng.randint(1, 4))]}
        models = train_model_set(corpora, config)
        doc = text(letters)
        scores = nb_log_posterior(doc, models)
        hand = {label: hand_nb(doc, docs, alpha, 2) for label, docs in corpora.items()}
        worst = max(worst, *(abs(scores[label] - hand[label]) for label in hand))
        best = max(hand.values())
        expected = sorted(label for label, s in hand.items() if best - s <= 1e-12)[0]
        if classify(doc, models, "naive-bayes").language != expected:
            argmax_mismatches += 1
    elapsed = time.perf_counter() - start
    record(2, worst <= 1e-10 and argmax_mismatches == 0 and elapsed < 5,
           f"naive Bayes vs hand formula, 200 toy models, max error {worst:.1e}, "
           f"{argmax_mismatches} argmax mismatches, {elapsed:.2f}s")


def test_3_mass_invariants(clean_models, perturbed_models):
    worst = 0.0
    for models in (clean_models, perturbed_models):
        for model in models.values():
            nb_mass = math.fsum(math.exp(v) for v in model.nb_log_prob.values()) + math.exp(model.unseen_log_prob)
            worst = max(worst,
                        abs(math.fsum(model.norm_freq.values()) - 1),
                        abs(nb_mass - 1),
                        abs(math.hypot(*(w for _, w in model.cosine_vector)) - 1))
    record(3, worst <= 1e-9, f"probability mass and vector norm within {worst:.1e} of 1 for 6 trained models")


def test_4_long_text_accuracy(split, long_docs):
    start = time.perf_counter()
    texts, domains = texts_by_language(split[0])
    models = train_model_set(texts, ModelConfig(), domains)
    nb = accuracy(models, long_docs, "content", "naive-bayes")
    rank = accuracy(models, long_docs, "content", "rank-order")
    elapsed = time.perf_counter() - start
    record(4, len(long_docs) >= 200 and nb >= 0.95 and rank >= 0.95 and elapsed < 60,
           f"held-out documents >= {LONG_CHARS} chars (n={len(long_docs)}): naive-bayes {nb:.4f}, "
           f"rank-order {rank:.4f}, {elapsed:.1f}s")


def test_5_degradation_direction(clean_models, sq_titles):
    stripped = make_variant(sq_titles, StripAll())
    results = {}
    for method in ("naive-bayes", "rank-order"):
        results[method] = (accuracy(clean_models, sq_titles, "title", method),
                           accuracy(clean_models, stripped, "title", method))
    ok = len(sq_titles) >= 200 and all(after < before for before, after in results.values())
    detail = ", ".join(f"{m} {b:.4f} -> {a:.4f}" for m, (b, a) in results.items())
    record(5, ok, f"StripAll Albanian titles (n={len(sq_titles)}) clean -> stripped: {detail}")


def test_6_perturbed_training_recovery(split, clean_models, long_docs, sq_titles):
    start = time.perf_counter()
    texts, domains = texts_by_language(make_variant(split[0], StripHalf(PERTURB_SEED, 0.5)))
    models = train_model_set(texts, ModelConfig(), domains)
    stripped_long = make_variant(long_docs, StripAll())
    stripped_titles = make_variant(sq_titles, StripAll())
    long_acc = accuracy(models, stripped_long, "content", "naive-bayes")
    title_acc = accuracy(models, stripped_titles, "title", "naive-bayes")
    baseline = accuracy(clean_models, stripped_titles, "title", "naive-bayes")
    clean_titles = accuracy(clean_models, sq_titles, "title", "naive-bayes")
    elapsed = time.perf_counter() - start
    ACCEPTANCE_RESULTS.append(f"INFO  criterion 6: retrained model on StripAll titles {title_acc:.4f} "
                              f"vs clean model on clean titles {clean_titles:.4f}")
    record(6, long_acc >= 0.99 and title_acc >= baseline and elapsed < 120,
           f"naive Bayes retrained on StripHalf(0.5): StripAll long text {long_acc:.4f} (n={len(stripped_long)}), "
           f"StripAll titles {title_acc:.4f} vs clean model {baseline:.4f} (n={len(stripped_titles)}), "
           f"{elapsed:.1f}s")


def test_7_determinism(split):
    def run():
        texts, domains = texts_by_language(split[0])
        models = train_model_set(texts, ModelConfig(), domains)
        perturbed = make_variant(split[1], StripHalf(42, 0.5))
        report = evaluate(models, perturbed, ["naive-bayes", "rank-order"])
        return [hashlib.sha256(data.encode("utf-8")).hexdigest() for data in (
            dumps_model_set(models), dumps_articles(perturbed), render_report(report, "tab-separated"))]

    first, second = run(), run()
    record(7, first == second,
           "sha256 of model file, perturbed corpus and report identical across two runs "
           f"({', '.join(h[:12] for h in first)})")


def test_8_excerpt_conformance(articles):
    excerpt = make_variant(articles, Excerpt(500))
    sizes_ok = all(len(d.content.encode("utf-8")) <= 500 for d in excerpt)
    decodes = all(d.content.encode("utf-8").decode("utf-8") == d.content for d in excerpt)
    data = dumps_articles(excerpt).encode("utf-8").decode("utf-8")
    scan = sum(len(d.content.encode("utf-8")) < 500 for d in articles)
    excluded = len(articles) - len(excerpt)
    record(8, sizes_ok and decodes and bool(data) and excluded == scan,
           f"Excerpt(500): all contents <= 500 bytes and valid UTF-8, excluded {excluded} vs scan {scan}")


def test_9_cfa_linearity_and_cosine_range(clean_models):
    rng = random.Random(9)
    alphabet = "abcdefghijklmnopqrstuvwxyzëç "
    linear_failures = range_failures = 0
    for _ in range(1000):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(5, 80))) + "a"
        k = rng.randint(2, 6)
        repeated = " ".join([text] * k)
        for model in clean_models.values():
            if cfa_score(repeated, model) != k * cfa_score(text, model):
                linear_failures += 1
            if not 0.0 <= cosine_score(text, model) <= 1.0:
                range_failures += 1
    record(9, linear_failures == 0 and range_failures == 0,
           f"CFA score(k*text) == k*score(text) and cosine in [0, 1] on 1000 random documents, "
           f"{linear_failures} + {range_failures} failures")

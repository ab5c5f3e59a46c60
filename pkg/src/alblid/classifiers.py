"""The five scoring methods and the :func:`classify` front door.

=============  ==========================================  =========
method         score                                       best
=============  ==========================================  =========
rank-order     out-of-place distance between rank profiles  smallest
cfa            summed training frequency of text n-grams   largest
cosine         cosine of n-gram count vectors               largest
naive-bayes    multinomial log posterior                    largest
short-words    log likelihood of words of <= 5 characters   largest
=============  ==========================================  =========
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .errors import ClassificationError, NoEvidence, ParameterError
from .profiles import LanguageModel, ModelSet, RankedProfile, rank_profile
from .text_prep import extract_ngrams, extract_short_words, normalize_text

TIE_TOLERANCE = 1e-12
UNKNOWN = "und"


class Method(str, enum.Enum):
    RANK_ORDER = "rank-order"
    CFA = "cfa"
    COSINE = "cosine"
    NAIVE_BAYES = "naive-bayes"
    SHORT_WORDS = "short-words"

    @property
    def minimizes(self) -> bool:
        return self is Method.RANK_ORDER

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    language: str
    method: Method
    scores: Mapping[str, float]
    tie: bool = False


# -- rank order -------------------------------------------------------------

def out_of_place_distance(doc_profile: RankedProfile, lang_profile: RankedProfile) -> int:
    """Sum of rank displacements of the document's n-grams in ``lang_profile``.

    An n-gram missing from the language profile costs ``len(lang_profile)``.
    """
    if not len(doc_profile):
        raise ClassificationError("empty document profile")
    if not len(lang_profile):
        raise ParameterError("empty language profile")
    penalty = len(lang_profile)
    ranks = lang_profile.ranks
    distance = 0
    for rank, gram in enumerate(doc_profile.ngrams):
        other = ranks.get(gram)
        distance += penalty if other is None else abs(rank - other)
    return distance


def _normalized(text: str) -> str:
    normalized = normalize_text(text)
    if not normalized:
        raise ClassificationError("text is empty after normalization")
    return normalized


def document_profile(text: str, model_set: ModelSet, K: int | None = None) -> RankedProfile:
    cfg = model_set.config
    counts = extract_ngrams(_normalized(text), cfg.rank_min, cfg.rank_max)
    return rank_profile(counts, K or cfg.profile_size)


def rank_order_scores(text: str, model_set: ModelSet, K: int | None = None) -> dict[str, int]:
    doc = document_profile(text, model_set, K)
    return {label: out_of_place_distance(doc, model.ranked) for label, model in model_set.items()}


# -- frequency based --------------------------------------------------------

def _ngrams(text: str, config) -> Counter[str]:
    return extract_ngrams(_normalized(text), config.ngram_min, config.ngram_max)


def cfa_score(text: str, model: LanguageModel) -> Fraction:
    """Cumulative frequency addition.

    Adds ``norm_freq[g]`` once per occurrence of each n-gram ``g`` of the
    text, skipping n-grams the model never saw. The sum is kept as an exact
    fraction (integer counts over the training total), so repeating the
    text ``k`` times multiplies the score by exactly ``k``.
    """
    return cfa_from_ngrams(_ngrams(text, model.config), model)


def cfa_from_ngrams(grams: Mapping[str, int], model: LanguageModel) -> Fraction:
    """CFA score of an already-extracted n-gram multiset."""
    counts = model.ngram_counts
    return Fraction(sum(c * counts.get(g, 0) for g, c in grams.items()), model.total)


def cosine_score(text: str, model: LanguageModel) -> float:
    """Cosine between the text's n-gram count vector and the model's top-M vector.

    The document vector is normalized over all of its n-grams, so n-grams
    outside the model's support lower the score instead of being dropped.
    """
    weights = model.cosine_weights
    grams = _ngrams(text, model.config)
    dot = math.fsum(c * weights[g] for g, c in grams.items() if g in weights)
    if not dot:
        return 0.0
    norm = math.sqrt(sum(c * c for c in grams.values()))
    return min(1.0, dot / norm)


def _log_priors(model_set: ModelSet, priors: str | Mapping[str, float]) -> dict[str, float]:
    if priors == "uniform":
        return {label: -math.log(len(model_set)) for label in model_set}
    if priors == "documents":
        total = sum(m.documents for m in model_set.values())
        if total == 0 or any(m.documents == 0 for m in model_set.values()):
            raise ParameterError("document priors need a document count for every model")
        return {label: math.log(m.documents / total) for label, m in model_set.items()}
    if isinstance(priors, Mapping):
        if set(priors) != set(model_set) or any(p <= 0 for p in priors.values()):
            raise ParameterError("explicit priors need a positive value for every language")
        return {label: math.log(priors[label]) for label in model_set}
    raise ParameterError(f"unknown priors mode {priors!r}")


def nb_log_posterior(text: str, model_set: ModelSet,
                     priors: str | Mapping[str, float] = "uniform") -> dict[str, float]:
    """Unnormalized multinomial naive Bayes log posterior per language.

    ``priors`` is ``"uniform"``, ``"documents"`` (proportional to training
    documents) or an explicit label -> probability mapping.
    """
    grams = _ngrams(text, model_set.config)
    scores = {}
    for label, log_prior in _log_priors(model_set, priors).items():
        model = model_set[label]
        table, unseen = model.nb_log_prob, model.unseen_log_prob
        scores[label] = log_prior + math.fsum(c * table.get(g, unseen) for g, c in grams.items())
    return scores


def short_word_score(text: str, model: LanguageModel) -> float:
    """Log likelihood of the text's short words under the model's word profile.

    Raises:
        NoEvidence: the text has no word of at most ``short_word_max_len`` characters.
    """
    words = extract_short_words(normalize_text(text), model.config.short_word_max_len)
    if not words:
        raise NoEvidence("no short words in text")
    table, unseen = model.short_word_log_prob, model.unseen_word_log_prob
    return math.fsum(c * table.get(w, unseen) for w, c in words.items())


# -- dispatch ---------------------------------------------------------------

def pick_winner(scores: Mapping[str, float], method: Method,
                min_margin: float | None = None) -> tuple[str, bool]:
    """Return ``(label, tie)`` for the optimum of ``scores`` under the method's polarity.

    Ties (within ``TIE_TOLERANCE``; exact for integer distances) go to the
    lexicographically smallest label. With ``min_margin`` set, a winner whose
    lead over the runner-up is below it is replaced by ``"und"``.
    """
    if not scores:
        raise ParameterError("no scores to choose from")
    sign = -1 if method.minimizes else 1
    best = max(sign * s for s in scores.values())
    exact = all(isinstance(s, int) for s in scores.values())
    tolerance = 0 if exact else TIE_TOLERANCE
    tied = sorted(label for label, s in scores.items() if best - sign * s <= tolerance)
    label = tied[0]
    if min_margin is not None and len(scores) > 1:
        runner_up = max(sign * s for lbl, s in scores.items() if lbl != label)
        if best - runner_up < min_margin:
            label = UNKNOWN
    return label, len(tied) > 1


def classify(text: str, model_set: ModelSet, method: Method | str = Method.NAIVE_BAYES, *,
             priors: str | Mapping[str, float] = "uniform", min_margin: float | None = None,
             K: int | None = None) -> Verdict:
    """Score ``text`` against every language with ``method`` and pick the best.

    ``K`` overrides the document profile size for the rank-order method.
    Scorer errors (empty text, no short words) propagate.
    """
    method = Method(method)
    if not len(model_set):
        raise ParameterError("model set is empty")
    if method is Method.RANK_ORDER:
        scores = rank_order_scores(text, model_set, K)
    elif method is Method.CFA:
        scores = {label: cfa_score(text, model) for label, model in model_set.items()}
    elif method is Method.COSINE:
        scores = {label: cosine_score(text, model) for label, model in model_set.items()}
    elif method is Method.NAIVE_BAYES:
        scores = nb_log_posterior(text, model_set, priors)
    else:
        scores = {label: short_word_score(text, model) for label, model in model_set.items()}
    label, tie = pick_winner(scores, method, min_margin)
    return Verdict(label, method, scores, tie)


def classify_rank_order(text: str, model_set: ModelSet, K: int | None = None) -> Verdict:
    return classify(text, model_set, Method.RANK_ORDER, K=K)


def classify_cfa(text: str, model_set: ModelSet) -> Verdict:
    return classify(text, model_set, Method.CFA)


def classify_cosine(text: str, model_set: ModelSet) -> Verdict:
    return classify(text, model_set, Method.COSINE)


def classify_nb(text: str, model_set: ModelSet, priors: str | Mapping[str, float] = "uniform") -> Verdict:
    return classify(text, model_set, Method.NAIVE_BAYES, priors=priors)


def classify_short_words(text: str, model_set: ModelSet) -> Verdict:
    return classify(text, model_set, Method.SHORT_WORDS)

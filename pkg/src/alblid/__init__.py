"""Character n-gram language identification with diacritic-robust training.

Five classifiers (rank-order distance, cumulative frequency addition,
cosine similarity, multinomial naive Bayes and short words) share one set of
per-language models trained from labeled corpora.
"""

from .classifiers import Method, Verdict, classify
from .corpus import (
    Document,
    Excerpt,
    LabeledCorpus,
    StripAll,
    StripHalf,
    load_article_corpus,
    load_corpus,
    load_folder_corpus,
    make_variant,
    split_train_test,
    texts_by_language,
)
from .errors import (
    AlblidError,
    ClassificationError,
    IngestionError,
    ModelFormatError,
    NoEvidence,
    ParameterError,
    TooShort,
    TrainingError,
)
from .evaluation import compare_runs, evaluate, render_report
from .profiles import ModelConfig, ModelSet, load_model_set, save_model_set, train_model_set
from .text_prep import PerturbationSpec, normalize_text, perturb_diacritics

__version__ = "0.1.0"

__all__ = [
    "AlblidError", "ClassificationError", "Document", "Excerpt", "IngestionError", "LabeledCorpus", "Method",
    "ModelConfig", "ModelFormatError", "ModelSet", "NoEvidence", "ParameterError", "PerturbationSpec",
    "StripAll", "StripHalf", "TooShort", "TrainingError", "Verdict", "classify", "compare_runs", "evaluate",
    "load_article_corpus", "load_corpus", "load_folder_corpus", "load_model_set", "make_variant", "normalize_text",
    "perturb_diacritics", "render_report", "save_model_set", "split_train_test", "texts_by_language",
    "train_model_set",
]

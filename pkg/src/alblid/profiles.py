"""Per-language statistical models and their on-disk format.

A :class:`LanguageModel` keeps the raw integer statistics gathered during
training (ranked profile counts, the full n-gram table, short-word counts)
and derives every real-valued quantity the classifiers use from them. The
model file stores only the integers, so a loaded model is bit-identical to
the one that was saved.

Model file grammar (UTF-8, ``\\n`` line ends, fields separated by a single
tab, no other whitespace)::

    alblid-model-set <TAB> 1
    ngram-range <TAB> n_min <TAB> n_max
    rank-range <TAB> n_min <TAB> n_max
    alpha <TAB> float
    profile-size <TAB> K
    cosine-size <TAB> M
    short-words <TAB> size <TAB> max_len
    languages [<TAB> label]...
    then, per language in label order:
    model <TAB> label
    documents <TAB> int
    training-bytes <TAB> int
    domains [<TAB> domain]...
    ranked <TAB> count       followed by count lines  ngram <TAB> count
    ngrams <TAB> count       followed by count lines  ngram <TAB> count
    short-words <TAB> count  followed by count lines  word <TAB> count
    cosine <TAB> count       followed by count lines  ngram <TAB> count
    end <TAB> label

Entry lines in every section are in rank order: descending count, ties by
ascending string.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path

from .errors import ModelFormatError, ParameterError, TrainingError
from .text_prep import MAX_N, extract_ngrams, extract_short_words, normalize_text

FORMAT_NAME = "alblid-model-set"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelConfig:
    """Extraction and model-size settings shared by every model in a set."""

    ngram_min: int = 1
    ngram_max: int = 4
    rank_min: int = 1
    rank_max: int = 5
    alpha: float = 1.0
    profile_size: int = 300
    cosine_size: int = 3500
    short_word_size: int = 200
    short_word_max_len: int = 5

    def __post_init__(self):
        for lo, hi, name in ((self.ngram_min, self.ngram_max, "ngram"), (self.rank_min, self.rank_max, "rank")):
            if not 1 <= lo <= hi <= MAX_N:
                raise ParameterError(f"{name} range must satisfy 1 <= min <= max <= {MAX_N}, got {lo}..{hi}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ParameterError(f"alpha must be a positive finite number, got {self.alpha}")
        for name in ("profile_size", "cosine_size", "short_word_size", "short_word_max_len"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name.replace('_', '-')} must be >= 1, got {getattr(self, name)}")


@dataclass(frozen=True)
class FrequencyTable:
    counts: Mapping[str, int]
    total: int
    n_min: int
    n_max: int


def rank_order(counts: Mapping[str, int]) -> list[tuple[str, int]]:
    """Items sorted by descending count, ties by ascending key."""
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def build_frequency_table(documents: Iterable[str], n_min: int, n_max: int) -> FrequencyTable:
    """Merge the n-gram counts of already-normalized documents.

    Raises:
        TrainingError: no document contributes a single n-gram.
    """
    counts: Counter[str] = Counter()
    for doc in documents:
        counts.update(extract_ngrams(doc, n_min, n_max))
    total = counts.total()
    if total == 0:
        raise TrainingError("cannot build a frequency table from an empty corpus")
    return FrequencyTable(dict(counts), total, n_min, n_max)


@dataclass(frozen=True)
class RankedProfile:
    """The top-K n-grams, most frequent first; the rank of an n-gram is its index."""

    ngrams: tuple[str, ...]
    counts: tuple[int, ...]
    size: int
    ranks: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ranks", {g: r for r, g in enumerate(self.ngrams)})
        if len(self.ranks) != len(self.ngrams):
            raise ParameterError("ranked profile contains duplicate n-grams")

    def __len__(self) -> int:
        return len(self.ngrams)

    @classmethod
    def from_ngrams(cls, ngrams: Iterable[str], size: int | None = None) -> RankedProfile:
        """Profile with the given order and dummy counts (for hand-built profiles)."""
        ngrams = tuple(ngrams)
        return cls(ngrams, tuple(range(len(ngrams), 0, -1)), size if size is not None else len(ngrams))


def rank_profile(table: FrequencyTable | Mapping[str, int], K: int = 300) -> RankedProfile:
    """Keep the ``K`` most frequent n-grams of ``table``."""
    if K < 1:
        raise ParameterError(f"profile size must be >= 1, got {K}")
    counts = table.counts if isinstance(table, FrequencyTable) else table
    top = rank_order(counts)[:K]
    return RankedProfile(tuple(g for g, _ in top), tuple(c for _, c in top), K)


@dataclass(frozen=True, eq=False)
class LanguageModel:
    """Everything the five classifiers need for one language.

    Only the integer statistics are constructor arguments; the real-valued
    fields are derived in ``__post_init__``.
    """

    language: str
    config: ModelConfig
    ranked: RankedProfile
    ngram_counts: Mapping[str, int]
    short_word_counts: Mapping[str, int]
    cosine_counts: Mapping[str, int]
    documents: int = 0
    training_bytes: int = 0
    domains: tuple[str, ...] = ()

    total: int = field(init=False)
    norm_freq: Mapping[str, float] = field(init=False, repr=False)
    nb_log_prob: Mapping[str, float] = field(init=False, repr=False)
    unseen_log_prob: float = field(init=False)
    short_words: Mapping[str, float] = field(init=False, repr=False)
    short_word_log_prob: Mapping[str, float] = field(init=False, repr=False)
    unseen_word_log_prob: float = field(init=False)
    cosine_vector: tuple[tuple[str, float], ...] = field(init=False, repr=False)
    cosine_weights: Mapping[str, float] = field(init=False, repr=False)

    def __post_init__(self):
        if not self.language or any(ch.isspace() for ch in self.language):
            raise ParameterError(f"invalid language label {self.language!r}")
        alpha = self.config.alpha
        set_ = object.__setattr__

        total = sum(self.ngram_counts.values())
        if total <= 0:
            raise TrainingError(f"model {self.language!r} has no n-grams")
        set_(self, "total", total)
        set_(self, "norm_freq", {g: c / total for g, c in self.ngram_counts.items()})

        log_denom = math.log(total + alpha * (len(self.ngram_counts) + 1))
        set_(self, "nb_log_prob", {g: math.log(c + alpha) - log_denom for g, c in self.ngram_counts.items()})
        set_(self, "unseen_log_prob", math.log(alpha) - log_denom)

        word_total = sum(self.short_word_counts.values())
        word_denom = word_total + alpha * (len(self.short_word_counts) + 1)
        set_(self, "short_words", {w: (c + alpha) / word_denom for w, c in self.short_word_counts.items()})
        set_(self, "short_word_log_prob",
             {w: math.log(c + alpha) - math.log(word_denom) for w, c in self.short_word_counts.items()})
        set_(self, "unseen_word_log_prob", math.log(alpha) - math.log(word_denom))

        # dividing by the gcd first makes the vector exactly invariant to count scaling
        top = rank_order(self.cosine_counts)
        divisor = reduce(math.gcd, (c for _, c in top), 0) or 1
        reduced = [(g, c // divisor) for g, c in top]
        norm = math.sqrt(sum(c * c for _, c in reduced))
        vector = tuple((g, c / norm) for g, c in reduced) if norm else ()
        set_(self, "cosine_vector", vector)
        set_(self, "cosine_weights", dict(vector))

    def __eq__(self, other):
        if not isinstance(other, LanguageModel):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((self.language, self.total))

    def _key(self):
        return (self.language, self.config, self.ranked.ngrams, self.ranked.counts, dict(self.ngram_counts),
                dict(self.short_word_counts), dict(self.cosine_counts), self.documents, self.training_bytes,
                self.domains)

    @property
    def vocabulary_size(self) -> int:
        return len(self.ngram_counts)


def train_language_model(language: str, corpus: Iterable[str], config: ModelConfig | None = None,
                         domains: Iterable[str] = ()) -> LanguageModel:
    """Train one language from raw document texts.

    Texts are normalized here. Only aggregate counts are kept, so document
    order never affects the result.

    Raises:
        TrainingError: the corpus has no text left after normalization.
    """
    config = config or ModelConfig()
    rank_counts: Counter[str] = Counter()
    ngram_counts: Counter[str] = Counter()
    word_counts: Counter[str] = Counter()
    documents = training_bytes = 0
    for raw in corpus:
        documents += 1
        training_bytes += len(raw.encode("utf-8"))
        text = normalize_text(raw)
        rank_counts.update(extract_ngrams(text, config.rank_min, config.rank_max))
        ngram_counts.update(extract_ngrams(text, config.ngram_min, config.ngram_max))
        word_counts.update(extract_short_words(text, config.short_word_max_len))
    if not ngram_counts:
        raise TrainingError(f"no text to train {language!r} on after normalization")

    ranked = rank_profile(rank_counts, config.profile_size)
    return LanguageModel(
        language=language,
        config=config,
        ranked=ranked,
        ngram_counts=dict(ngram_counts),
        short_word_counts=dict(rank_order(word_counts)[:config.short_word_size]),
        cosine_counts=dict(rank_order(ngram_counts)[:config.cosine_size]),
        documents=documents,
        training_bytes=training_bytes,
        domains=tuple(sorted(set(domains))),
    )


class ModelSet(Mapping[str, LanguageModel]):
    """Immutable collection of models sharing one :class:`ModelConfig`, keyed by label."""

    def __init__(self, models: Iterable[LanguageModel], config: ModelConfig | None = None):
        ordered: dict[str, LanguageModel] = {}
        for model in models:
            if model.language in ordered:
                raise ParameterError(f"duplicate language label {model.language!r}")
            ordered[model.language] = model
        if not ordered and config is None:
            raise ParameterError("a model set needs at least one model or an explicit config")
        config = config or next(iter(ordered.values())).config
        for model in ordered.values():
            if model.config != config:
                raise ParameterError(f"model {model.language!r} was trained with a different configuration")
        self.config = config
        self._models = {label: ordered[label] for label in sorted(ordered)}

    def __getitem__(self, label: str) -> LanguageModel:
        return self._models[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._models)

    def __len__(self) -> int:
        return len(self._models)

    def __eq__(self, other):
        if not isinstance(other, ModelSet):
            return NotImplemented
        return self.config == other.config and self._models == other._models

    def __repr__(self):
        return f"ModelSet({list(self._models)})"


def train_model_set(texts: Mapping[str, Iterable[str]], config: ModelConfig | None = None,
                    domains: Mapping[str, Iterable[str]] | None = None) -> ModelSet:
    """Train one model per key of ``texts``."""
    config = config or ModelConfig()
    domains = domains or {}
    models = [train_language_model(label, docs, config, domains.get(label, ())) for label, docs in texts.items()]
    if not models:
        raise TrainingError("no languages to train")
    return ModelSet(models, config)


# -- persistence ------------------------------------------------------------

def dumps_model_set(models: ModelSet) -> str:
    cfg = models.config
    lines = [
        f"{FORMAT_NAME}\t{FORMAT_VERSION}",
        f"ngram-range\t{cfg.ngram_min}\t{cfg.ngram_max}",
        f"rank-range\t{cfg.rank_min}\t{cfg.rank_max}",
        f"alpha\t{cfg.alpha!r}",
        f"profile-size\t{cfg.profile_size}",
        f"cosine-size\t{cfg.cosine_size}",
        f"short-words\t{cfg.short_word_size}\t{cfg.short_word_max_len}",
        "\t".join(["languages", *models]),
    ]
    for label, model in models.items():
        lines.append(f"model\t{label}")
        lines.append(f"documents\t{model.documents}")
        lines.append(f"training-bytes\t{model.training_bytes}")
        lines.append("\t".join(["domains", *model.domains]))
        sections = (
            ("ranked", list(zip(model.ranked.ngrams, model.ranked.counts))),
            ("ngrams", rank_order(model.ngram_counts)),
            ("short-words", rank_order(model.short_word_counts)),
            ("cosine", rank_order(model.cosine_counts)),
        )
        for name, entries in sections:
            lines.append(f"{name}\t{len(entries)}")
            lines.extend(f"{key}\t{count}" for key, count in entries)
        lines.append(f"end\t{label}")
    return "\n".join(lines) + "\n"


def save_model_set(models: ModelSet, path: str | Path) -> None:
    Path(path).write_bytes(dumps_model_set(models).encode("utf-8"))


class _Reader:
    def __init__(self, text: str, origin: str):
        if not text.endswith("\n"):
            raise ModelFormatError(f"{origin}: malformed file, missing final newline (truncated?)")
        self.lines = text[:-1].split("\n")
        self.pos = 0
        self.origin = origin

    def fail(self, message: str) -> ModelFormatError:
        return ModelFormatError(f"{self.origin}:{self.pos}: {message}")

    def fields(self, tag: str, arity: int | None = None) -> list[str]:
        if self.pos >= len(self.lines):
            self.pos += 1
            raise self.fail(f"malformed file, unexpected end while expecting {tag!r} (truncated?)")
        parts = self.lines[self.pos].split("\t")
        self.pos += 1
        if parts[0] != tag:
            raise self.fail(f"malformed file, expected {tag!r}, found {parts[0]!r}")
        values = parts[1:]
        if arity is not None and len(values) != arity:
            raise self.fail(f"malformed file, {tag!r} takes {arity} field(s), found {len(values)}")
        if any(not v or v != v.strip() for v in values):
            raise self.fail(f"malformed file, empty or padded field in {tag!r}")
        return values

    def integer(self, value: str, minimum: int = 0) -> int:
        if not value.isdigit() or (len(value) > 1 and value[0] == "0"):
            raise self.fail(f"malformed file, not a canonical integer: {value!r}")
        number = int(value)
        if number < minimum:
            raise self.fail(f"malformed file, {number} is below {minimum}")
        return number

    def section(self, tag: str, lo: int, hi: int) -> list[tuple[str, int]]:
        (size,) = self.fields(tag, 1)
        entries = []
        for _ in range(self.integer(size)):
            if self.pos >= len(self.lines):
                self.pos += 1
                raise self.fail(f"malformed file, section {tag!r} ends early (truncated?)")
            parts = self.lines[self.pos].split("\t")
            self.pos += 1
            if len(parts) != 2 or not parts[0] or any(ch.isspace() for ch in parts[0]):
                raise self.fail(f"malformed file, bad entry in section {tag!r}")
            if not lo <= len(parts[0]) <= hi:
                raise self.fail(f"malformed file, {parts[0]!r} is outside the length range {lo}..{hi}")
            entries.append((parts[0], self.integer(parts[1], minimum=1)))
        if entries != rank_order(dict(entries)):
            raise self.fail(f"malformed file, section {tag!r} is not in rank order or has duplicates")
        return entries


def loads_model_set(text: str, origin: str = "<string>") -> ModelSet:
    reader = _Reader(text, origin)
    header = reader.lines[0].split("\t") if reader.lines else []
    if not header or header[0] != FORMAT_NAME:
        raise ModelFormatError(f"{origin}: malformed file, not an {FORMAT_NAME} file")
    if header[1:] != [str(FORMAT_VERSION)]:
        raise ModelFormatError(f"{origin}: format version mismatch, expected {FORMAT_VERSION}, found {header[1:]}")
    reader.pos = 1
    ngram_min, ngram_max = (reader.integer(v, 1) for v in reader.fields("ngram-range", 2))
    rank_min, rank_max = (reader.integer(v, 1) for v in reader.fields("rank-range", 2))
    (alpha_text,) = reader.fields("alpha", 1)
    try:
        alpha = float(alpha_text)
    except ValueError:
        raise reader.fail(f"malformed file, bad alpha {alpha_text!r}") from None
    (profile_size,) = (reader.integer(v, 1) for v in reader.fields("profile-size", 1))
    (cosine_size,) = (reader.integer(v, 1) for v in reader.fields("cosine-size", 1))
    short_size, short_len = (reader.integer(v, 1) for v in reader.fields("short-words", 2))
    try:
        config = ModelConfig(ngram_min, ngram_max, rank_min, rank_max, alpha, profile_size, cosine_size,
                             short_size, short_len)
    except ParameterError as exc:
        raise reader.fail(f"malformed file, {exc}") from None
    labels = reader.fields("languages")
    duplicates = sorted({label for label in labels if labels.count(label) > 1})
    if duplicates:
        raise reader.fail(f"duplicate language label(s) {', '.join(duplicates)}")

    models = []
    seen: set[str] = set()
    while reader.pos < len(reader.lines):
        (label,) = reader.fields("model", 1)
        if label in seen:
            raise reader.fail(f"duplicate language label {label!r}")
        seen.add(label)
        (documents,) = (reader.integer(v) for v in reader.fields("documents", 1))
        (training_bytes,) = (reader.integer(v) for v in reader.fields("training-bytes", 1))
        domains = tuple(reader.fields("domains"))
        ranked = reader.section("ranked", rank_min, rank_max)
        ngrams = reader.section("ngrams", ngram_min, ngram_max)
        short_words = reader.section("short-words", 1, short_len)
        cosine = reader.section("cosine", ngram_min, ngram_max)
        reader.fields("end", 1)
        if len(ranked) > profile_size or len(cosine) > cosine_size or len(short_words) > short_size:
            raise reader.fail(f"malformed file, a section of {label!r} exceeds its configured size")
        try:
            models.append(LanguageModel(
                language=label,
                config=config,
                ranked=RankedProfile(tuple(g for g, _ in ranked), tuple(c for _, c in ranked), profile_size),
                ngram_counts=dict(ngrams),
                short_word_counts=dict(short_words),
                cosine_counts=dict(cosine),
                documents=documents,
                training_bytes=training_bytes,
                domains=domains,
            ))
        except (ParameterError, TrainingError) as exc:
            raise reader.fail(f"malformed file, {exc}") from None
    if [m.language for m in models] != labels:
        raise ModelFormatError(f"{origin}: malformed file, models {[m.language for m in models]} "
                               f"do not match the language list {labels}")
    return ModelSet(models, config)


def load_model_set(path: str | Path) -> ModelSet:
    """Read a file written by :func:`save_model_set`.

    Raises:
        ModelFormatError: wrong version, malformed or truncated content,
            duplicate language labels, or bytes that are not UTF-8.
    """
    path = Path(path)
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ModelFormatError(f"{path}: malformed file, invalid UTF-8 at byte {exc.start}") from None
    return loads_model_set(text, str(path))

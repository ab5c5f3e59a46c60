"""Labeled corpora: ingestion, dataset variants and train/test splits.

Two on-disk layouts are read:

* a folder tree ``root/<language>/<domain>/<name>.txt`` with one UTF-8
  document per file (title left empty);
* an article file with one JSON object per line carrying the fields
  ``id``, ``language``, ``title``, ``content``, ``domain`` and ``source``.

Problems with individual files or records never abort ingestion; they are
collected as :class:`Rejection` entries on the resulting corpus.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import IO

from .errors import IngestionError, ParameterError, TooShort
from .text_prep import PerturbationSpec, excerpt_bytes, perturb_diacritics

FIELDS = ("title", "content")


@dataclass(frozen=True)
class Document:
    id: str
    language: str
    title: str
    content: str
    domain: str = ""
    source: str = ""

    def __post_init__(self):
        if not self.id:
            raise ParameterError("document id is empty")
        if not self.language.strip():
            raise ParameterError(f"{self.id}: language label is empty")
        if not self.content.encode("utf-8"):
            raise ParameterError(f"{self.id}: content is empty")

    @property
    def text(self) -> str:
        """Title and content together, as used for training."""
        return f"{self.title}\n{self.content}" if self.title else self.content


@dataclass(frozen=True)
class Rejection:
    source: str
    reason: str


@dataclass(frozen=True)
class LabeledCorpus:
    """An immutable sequence of documents with unique ids.

    ``skip_fields`` names document fields that are not meaningful for
    evaluation (titles of an excerpt corpus, for instance).
    """

    documents: tuple[Document, ...]
    provenance: str = "articles"
    rejections: tuple[Rejection, ...] = ()
    skip_fields: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        seen: set[str] = set()
        for doc in self.documents:
            if doc.id in seen:
                raise ParameterError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    @property
    def ids(self) -> list[str]:
        return [doc.id for doc in self.documents]

    @property
    def languages(self) -> list[str]:
        return sorted({doc.language for doc in self.documents})

    def filter(self, keep, provenance: str | None = None) -> LabeledCorpus:
        return replace(self, documents=tuple(d for d in self.documents if keep(d)),
                       provenance=provenance or self.provenance)


def merge(corpora: Iterable[LabeledCorpus], provenance: str) -> LabeledCorpus:
    corpora = list(corpora)
    return LabeledCorpus(
        tuple(doc for c in corpora for doc in c),
        provenance,
        tuple(r for c in corpora for r in c.rejections),
        frozenset().union(*(c.skip_fields for c in corpora)),
    )


def texts_by_language(corpus: LabeledCorpus) -> tuple[dict[str, list[str]], dict[str, set[str]]]:
    """Group training texts and domain labels by language."""
    texts: dict[str, list[str]] = defaultdict(list)
    domains: dict[str, set[str]] = defaultdict(set)
    for doc in corpus:
        texts[doc.language].append(doc.text)
        if doc.domain:
            domains[doc.language].add(doc.domain)
    return dict(sorted(texts.items())), dict(domains)


# -- ingestion --------------------------------------------------------------

def load_folder_corpus(root: str | Path, provenance: str | None = None) -> LabeledCorpus:
    """Read ``root/<language>/<domain>/<file>.txt``.

    Raises:
        IngestionError: no valid document was found.
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestionError(f"{root}: not a directory")
    documents, rejections = [], []
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        rel = path.relative_to(root).as_posix()
        parts = path.relative_to(root).parts
        if len(parts) != 3 or path.suffix != ".txt":
            rejections.append(Rejection(rel, "not at <language>/<domain>/<name>.txt"))
            continue
        try:
            raw = path.read_bytes().decode("utf-8")
        except UnicodeDecodeError as exc:
            rejections.append(Rejection(rel, f"invalid UTF-8 at byte {exc.start}"))
            continue
        except OSError as exc:
            rejections.append(Rejection(rel, f"unreadable: {exc.strerror}"))
            continue
        try:
            documents.append(Document(rel, parts[0], "", raw.strip(), parts[1], root.name))
        except ParameterError as exc:
            rejections.append(Rejection(rel, str(exc)))
    if not documents:
        raise IngestionError(f"{root}: no valid documents", rejections)
    return LabeledCorpus(tuple(documents), provenance or root.name, tuple(rejections))


def load_article_corpus(path: str | Path, provenance: str | None = None) -> LabeledCorpus:
    """Read a newline-delimited JSON article file.

    Raises:
        IngestionError: the file is unreadable or holds no valid record.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IngestionError(f"{path}: unreadable: {exc.strerror}") from None
    documents, rejections = [], []
    seen: set[str] = set()
    for lineno, line in enumerate(data.split(b"\n"), 1):
        where = f"{path}:{lineno}"
        if not line.strip():
            continue
        try:
            record = json.loads(line.decode("utf-8"))
        except UnicodeDecodeError as exc:
            rejections.append(Rejection(where, f"invalid UTF-8 at byte {exc.start}"))
            continue
        except json.JSONDecodeError as exc:
            rejections.append(Rejection(where, f"malformed record: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            rejections.append(Rejection(where, "malformed record: not an object"))
            continue
        missing = [k for k in ("id", "language", "content") if k not in record]
        values = {k: record.get(k, "") for k in ("id", "language", "title", "content", "domain", "source")}
        if missing or not all(isinstance(v, str) for v in values.values()):
            rejections.append(Rejection(where, f"malformed record: missing or non-string field(s) "
                                               f"{missing or [k for k, v in values.items() if not isinstance(v, str)]}"))
            continue
        if values["id"] in seen:
            rejections.append(Rejection(where, f"duplicate id {values['id']!r}"))
            continue
        try:
            documents.append(Document(**values))
        except ParameterError as exc:
            rejections.append(Rejection(where, str(exc)))
            continue
        seen.add(values["id"])
    if not documents:
        raise IngestionError(f"{path}: no valid records", rejections)
    return LabeledCorpus(tuple(documents), provenance or path.stem, tuple(rejections))


def load_corpus(path: str | Path, provenance: str | None = None) -> LabeledCorpus:
    """Folder tree if ``path`` is a directory, article file otherwise."""
    path = Path(path)
    if path.is_dir():
        return load_folder_corpus(path, provenance)
    return load_article_corpus(path, provenance)


def dumps_articles(corpus: LabeledCorpus) -> str:
    return "".join(
        json.dumps({"id": d.id, "language": d.language, "title": d.title, "content": d.content,
                    "domain": d.domain, "source": d.source}, ensure_ascii=False, sort_keys=True) + "\n"
        for d in corpus
    )


def write_articles(corpus: LabeledCorpus, path: str | Path) -> None:
    Path(path).write_bytes(dumps_articles(corpus).encode("utf-8"))


def write_rejections(rejections: Iterable[Rejection], out: IO[str]) -> None:
    """Tab-separated ``source<TAB>reason`` lines."""
    for rejection in rejections:
        out.write(f"{rejection.source}\t{rejection.reason}\n")


def deduplicate(corpus: LabeledCorpus) -> LabeledCorpus:
    """Drop documents whose content is byte-identical to one with a smaller id."""
    keep, rejections = {}, list(corpus.rejections)
    for doc in sorted(corpus, key=lambda d: d.id):
        digest = hashlib.sha256(doc.content.encode("utf-8")).hexdigest()
        if digest in keep:
            rejections.append(Rejection(doc.id, f"duplicate content of {keep[digest]}"))
        else:
            keep[digest] = doc.id
    kept = set(keep.values())
    return replace(corpus, documents=tuple(d for d in corpus if d.id in kept), rejections=tuple(rejections))


# -- variants ---------------------------------------------------------------

@dataclass(frozen=True)
class StripAll:
    """Replace every Ë/ë/Ç/ç with E/e/C/c."""

    tag = "strip-all"


@dataclass(frozen=True)
class StripHalf:
    """Replace each Ë/ë/Ç/ç independently with the given probability."""

    seed: int
    probability: float = 0.5

    @property
    def tag(self) -> str:
        return f"strip-half(p={self.probability},seed={self.seed})"


@dataclass(frozen=True)
class Excerpt:
    """Cut contents to their first ``max_bytes`` bytes, dropping shorter documents."""

    max_bytes: int = 500

    @property
    def tag(self) -> str:
        return f"excerpt({self.max_bytes})"


Variant = StripAll | StripHalf | Excerpt


def make_variant(corpus: LabeledCorpus, variant: Variant) -> LabeledCorpus:
    """Derive a perturbed or excerpted copy of ``corpus``.

    Ids, languages, domains and sources are never changed. The strip
    variants touch titles and contents; :class:`Excerpt` touches contents
    only and marks titles as skipped for evaluation.

    Raises:
        IngestionError: the corpus is empty, or no document survives the excerpt.
    """
    if not len(corpus):
        raise IngestionError("cannot derive a variant of an empty corpus")
    provenance = f"{corpus.provenance}+{variant.tag}"
    if isinstance(variant, Excerpt):
        documents, rejections = [], list(corpus.rejections)
        for doc in corpus:
            try:
                documents.append(replace(doc, content=excerpt_bytes(doc.content, variant.max_bytes)))
            except TooShort as exc:
                rejections.append(Rejection(doc.id, f"too short: {exc.byte_length} bytes"))
        if not documents:
            raise IngestionError(f"no document reaches {variant.max_bytes} bytes", rejections)
        return LabeledCorpus(tuple(documents), provenance, tuple(rejections),
                             corpus.skip_fields | {"title"})

    if isinstance(variant, StripAll):
        spec = PerturbationSpec(1.0)
    elif isinstance(variant, StripHalf):
        spec = PerturbationSpec(variant.probability, variant.seed)
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    documents = tuple(
        replace(doc,
                title=perturb_diacritics(doc.title, spec, key=f"{doc.id}\ttitle"),
                content=perturb_diacritics(doc.content, spec, key=f"{doc.id}\tcontent"))
        for doc in corpus
    )
    return replace(corpus, documents=documents, provenance=provenance)


# -- splitting and statistics -----------------------------------------------

def split_train_test(corpus: LabeledCorpus, train_fraction: float, seed: int,
                     by_language: bool = False) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Seeded disjoint split by document id.

    The ids are sorted, shuffled with ``random.Random(seed)`` and the first
    ``round(train_fraction * n)`` go to training. With ``by_language`` each
    language is split separately with the same fraction.

    Raises:
        ParameterError: the fraction is outside (0, 1) or a part would be empty.
    """
    if not 0 < train_fraction < 1:
        raise ParameterError(f"train fraction must be in (0, 1), got {train_fraction}")
    groups: dict[str, list[str]] = defaultdict(list)
    for doc in corpus:
        groups[doc.language if by_language else ""].append(doc.id)
    rng = random.Random(seed)
    train_ids: set[str] = set()
    for key in sorted(groups):
        ids = sorted(groups[key])
        rng.shuffle(ids)
        n_train = round(train_fraction * len(ids))
        if not 0 < n_train < len(ids):
            raise ParameterError(f"corpus too small to split: {len(ids)} document(s) "
                                 f"{'for ' + key + ' ' if key else ''}at fraction {train_fraction}")
        train_ids.update(ids[:n_train])
    train = corpus.filter(lambda d: d.id in train_ids, f"{corpus.provenance}+train")
    test = corpus.filter(lambda d: d.id not in train_ids, f"{corpus.provenance}+test")
    return train, test


@dataclass(frozen=True)
class FieldStats:
    min: int
    max: int
    avg: Decimal


@dataclass(frozen=True)
class CorpusStats:
    documents: int
    title: FieldStats | None
    content: FieldStats | None


def _field_stats(lengths: list[int], digits: int) -> FieldStats | None:
    if not lengths:
        return None
    avg = (Decimal(sum(lengths)) / Decimal(len(lengths))).quantize(Decimal(1).scaleb(-digits), ROUND_HALF_UP)
    return FieldStats(min(lengths), max(lengths), avg)


def corpus_stats(corpus: LabeledCorpus, digits: int = 0) -> CorpusStats:
    """UTF-8 byte-length min/max/mean of titles and contents.

    Empty titles are left out; if every title is empty the title entry is
    ``None``. Means are rounded half-up to ``digits`` decimals.
    """
    titles = [len(d.title.encode("utf-8")) for d in corpus if d.title]
    contents = [len(d.content.encode("utf-8")) for d in corpus]
    return CorpusStats(len(corpus), _field_stats(titles, digits), _field_stats(contents, digits))

"""Text normalization, tokenization and dataset perturbation.

Everything here is a pure function of its arguments. The n-gram and
short-word extractors expect text that has already been through
:func:`normalize_text`.
"""

from __future__ import annotations

import hashlib
import random
import unicodedata
from collections import Counter
from dataclasses import dataclass

from .errors import ParameterError, TooShort

PAD = "_"
MAX_N = 8

#: The only characters ever touched by :func:`perturb_diacritics`.
DIACRITIC_MAP = {"Ë": "E", "ë": "e", "Ç": "C", "ç": "c"}

# Unicode major categories that act as word separators: numbers,
# punctuation, symbols, separators and control/format characters.
_SEPARATOR_CATEGORIES = frozenset("NPSZC")


def normalize_text(raw: str) -> str:
    """Lowercase ``raw`` and reduce it to space-separated letter runs.

    Digits, punctuation, symbols and control characters become spaces,
    whitespace runs collapse to a single space and the ends are trimmed.
    Case folding is per character and one-to-one: a character whose
    lowercase form is longer than one character is kept unchanged.
    Diacritics survive, and the result is NFC composed.

    >>> normalize_text("Çelësi 123, OK?")
    'çelësi ok'
    """
    chars = []
    for ch in raw:
        if unicodedata.category(ch)[0] in _SEPARATOR_CATEGORIES:
            chars.append(" ")
            continue
        lower = ch.lower()
        chars.append(lower if len(lower) == 1 else ch)
    composed = unicodedata.normalize("NFC", "".join(chars))
    return " ".join(composed.split())


def _check_bounds(n_min: int, n_max: int) -> None:
    if not (isinstance(n_min, int) and isinstance(n_max, int)):
        raise ParameterError(f"n-gram bounds must be integers, got {n_min!r}, {n_max!r}")
    if not 1 <= n_min <= n_max <= MAX_N:
        raise ParameterError(f"need 1 <= n_min <= n_max <= {MAX_N}, got {n_min}, {n_max}")


def extract_ngrams(text: str, n_min: int, n_max: int) -> Counter[str]:
    """Count character n-grams of every length in ``[n_min, n_max]``.

    Each word is padded as ``_word_`` before windows are taken, so word
    boundaries show up in the n-grams and whitespace never does.

    Raises:
        ParameterError: the bounds are not ``1 <= n_min <= n_max <= 8``.
    """
    _check_bounds(n_min, n_max)
    counts: Counter[str] = Counter()
    for word in text.split():
        padded = PAD + word + PAD
        size = len(padded)
        for n in range(n_min, min(n_max, size) + 1):
            counts.update(padded[i:i + n] for i in range(size - n + 1))
    return counts


def ngram_count(text: str, n_min: int, n_max: int) -> int:
    """Number of n-gram windows :func:`extract_ngrams` would count."""
    _check_bounds(n_min, n_max)
    total = 0
    for word in text.split():
        size = len(word) + 2
        total += sum(max(0, size - n + 1) for n in range(n_min, n_max + 1))
    return total


def extract_short_words(text: str, max_len: int = 5) -> Counter[str]:
    """Count the words of ``text`` that are at most ``max_len`` characters long."""
    return Counter(word for word in text.split() if len(word) <= max_len)


@dataclass(frozen=True)
class PerturbationSpec:
    """How to degrade Ë/ë/Ç/ç into E/e/C/c.

    ``probability`` is the per-occurrence replacement chance; ``seed``
    fixes the pseudo-random stream.
    """

    probability: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ParameterError(f"probability must be in [0, 1], got {self.probability}")
        if not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def stable_hash(key: str) -> int:
    """64-bit BLAKE2b digest of ``key``; identical on every platform and run."""
    return int.from_bytes(hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest(), "big")


def perturb_diacritics(text: str, spec: PerturbationSpec, key: str | None = None) -> str:
    """Replace each Ë/ë/Ç/ç independently with probability ``spec.probability``.

    One Bernoulli draw is made per mapped character, in text order, from a
    Mersenne Twister (:class:`random.Random`) seeded with
    ``spec.seed XOR stable_hash(key)``. ``key`` identifies the document and
    defaults to the text itself. All other characters pass through.
    """
    probability = spec.probability
    if probability == 0.0:
        return text
    rng = random.Random(spec.seed ^ stable_hash(text if key is None else key))
    out = []
    for ch in text:
        replacement = DIACRITIC_MAP.get(ch)
        if replacement is not None and rng.random() < probability:
            out.append(replacement)
        else:
            out.append(ch)
    return "".join(out)


def excerpt_bytes(text: str, max_bytes: int = 500) -> str:
    """Return the longest prefix of ``text`` that fits in ``max_bytes`` UTF-8 bytes.

    The cut never splits a multi-byte character.

    Raises:
        TooShort: the encoded text is shorter than ``max_bytes``.
        ParameterError: ``max_bytes`` < 1.
    """
    if max_bytes < 1:
        raise ParameterError(f"max_bytes must be >= 1, got {max_bytes}")
    data = text.encode("utf-8")
    if len(data) < max_bytes:
        raise TooShort(len(data), max_bytes)
    cut = max_bytes
    # back off over UTF-8 continuation bytes (0b10xxxxxx)
    while cut < len(data) and cut > 0 and data[cut] & 0xC0 == 0x80:
        cut -= 1
    return data[:cut].decode("utf-8")

"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class AlblidError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(AlblidError, ValueError):
    """An argument is outside its documented bounds."""


class TrainingError(AlblidError):
    """A model cannot be trained from the supplied corpus."""


class ModelFormatError(AlblidError):
    """A model file cannot be loaded."""


class ClassificationError(AlblidError):
    """The input carries no usable features for the requested method."""


class NoEvidence(ClassificationError):
    """The short-words method found no word of length <= max_len."""


class TooShort(AlblidError):
    """Text is shorter than the excerpt length and must be excluded.

    Attributes:
        byte_length: UTF-8 length of the rejected text.
        max_bytes: the excerpt length that was requested.
    """

    def __init__(self, byte_length: int, max_bytes: int):
        super().__init__(f"text is {byte_length} bytes, excerpt needs {max_bytes}")
        self.byte_length = byte_length
        self.max_bytes = max_bytes


class IngestionError(AlblidError):
    """A corpus yielded no valid documents."""

    def __init__(self, message: str, rejections=()):
        super().__init__(message)
        self.rejections = list(rejections)


class EvaluationError(AlblidError):
    """An evaluation or comparison has no valid input."""

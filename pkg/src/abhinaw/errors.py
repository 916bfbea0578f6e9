"""Exception types shared across the package."""

from __future__ import annotations


class AbhinawError(Exception):
    """Base class for every error raised by this package."""


class InputError(AbhinawError, ValueError):
    """Bad user input: empty reference, malformed files, degenerate data."""


class EmptyReference(InputError):
    pass


class NoCandidates(InputError):
    pass


class MalformedCsv(InputError):
    def __init__(self, path, row: int, message: str):
        self.path = str(path)
        self.row = row
        super().__init__(f"{self.path}: row {row}: {message}")


class EmptyReferenceText(MalformedCsv):
    pass


class DuplicateReferenceId(MalformedCsv):
    pass


class DuplicateKey(MalformedCsv):
    pass


class UnknownReferenceId(InputError):
    def __init__(self, reference_id: str, row: int | None = None, path=None):
        self.reference_id = reference_id
        self.row = row
        where = ""
        if path is not None:
            where += f"{path}: "
        if row is not None:
            where += f"row {row}: "
        super().__init__(f"{where}unknown reference_id {reference_id!r}")


class InsufficientPoints(InputError):
    pass


class ZeroVariance(InputError):
    pass


class BackendError(AbhinawError):
    """The OCR backend or its environment is unusable."""


class AuthMissing(BackendError):
    pass


class BackendUnavailable(BackendError):
    pass


class TranscriptionError(AbhinawError):
    """A single transcribe call failed; the caller may retry."""


class TranscriptionFailed(AbhinawError):
    """An (image, repetition) read that exhausted its retry budget."""

    def __init__(self, image_index: int, repetition_index: int, cause: str):
        self.image_index = image_index
        self.repetition_index = repetition_index
        self.cause = cause
        super().__init__(
            f"image {image_index} repetition {repetition_index}: {cause}"
        )

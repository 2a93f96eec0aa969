"""Exception hierarchy shared across the toolkit.

The CLI maps these onto its exit-code contract: ConfigError -> 1,
DataError (and subclasses) -> 2, RemoteError -> 3.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ToolkitError):
    """Bad configuration: unknown options, invalid values, unusable flags."""


class DataError(ToolkitError):
    """Bad input data: malformed files, violated preconditions, misalignment."""


class CorpusFormatError(DataError):
    """Malformed corpus/lexicon record; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AlignmentError(DataError):
    """Hypotheses and references/test items are not aligned 1:1."""


class LanguageError(DataError):
    """A detector was applied to a sentence in the wrong language."""


class RemoteError(ToolkitError):
    """Remote translation service failed after retries."""

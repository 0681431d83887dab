"""Exception hierarchy. Everything user-facing derives from :class:`EmoframeError`."""

from __future__ import annotations


class EmoframeError(Exception):
    """Base class for errors caused by bad input or configuration."""


class LexiconParseError(EmoframeError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IngestError(EmoframeError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ConfigError(EmoframeError):
    pass

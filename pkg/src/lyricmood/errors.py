"""Exception hierarchy. Everything raised on bad data derives from LyricMoodError."""

from __future__ import annotations


class LyricMoodError(Exception):
    pass


class DecodeError(LyricMoodError):
    """Input bytes are not valid UTF-8."""

    def __init__(self, offset: int, source: str | None = None, reason: str = ""):
        self.offset = offset
        self.source = source
        where = f"{source}: " if source else ""
        super().__init__(f"{where}invalid UTF-8 at byte offset {offset}" + (f" ({reason})" if reason else ""))


class LabelError(LyricMoodError, ValueError):
    pass


class SchemaError(LyricMoodError):
    pass


class KBParseError(LyricMoodError):
    pass


class DuplicateKeyError(LyricMoodError):
    pass


class CorpusError(LyricMoodError):
    pass


class NoEvidence(LyricMoodError):
    """No token of the document was found in the knowledge base."""

    def __init__(self, title: str = ""):
        self.title = title
        super().__init__(f"no knowledge-base term matched{' in ' + repr(title) if title else ''}")

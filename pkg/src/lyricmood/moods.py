from __future__ import annotations

from enum import Enum

from lyricmood.errors import LabelError


class Mood(str, Enum):
    # declaration order is the canonical order: CSV columns, arrays, tie-breaks
    HAPPY = "happy"
    SAD = "sad"
    ROMANTIC = "romantic"
    DEVOTIONAL = "devotional"
    PARTY = "party"

    @property
    def index(self) -> int:
        return _INDEX[self]

    @classmethod
    def parse(cls, value: str | Mood) -> Mood:
        if isinstance(value, Mood):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise LabelError(
                f"unknown mood {value!r}; expected one of {', '.join(m.value for m in MOODS)}"
            ) from None

    def __str__(self) -> str:
        return self.value


MOODS: tuple[Mood, ...] = tuple(Mood)
_INDEX = {m: i for i, m in enumerate(MOODS)}
N_MOODS = len(MOODS)

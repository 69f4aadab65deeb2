"""Built-in deterministic recognizer: gazetteers plus date/age patterns.

This is the default ``--model lexicon`` backend. It is demo-scale by
design — small word lists with exact, word-bounded matching — so its
output is reproducible without any downloaded model. Proper nouns and
zodiac signs match case-sensitively (``UK`` but not ``uk``); job and
topic words match in any case. Real deployments that need recall
beyond these lists should use the ``spacy:NAME`` backend instead.
"""

from __future__ import annotations

import re

from .spans import MODEL, Span

PERSONS = (
    "Pedro", "Ben", "Alice", "Carlos", "David", "Emma",
    "John", "Laura", "Maria", "Robert",
)
LOCATIONS = (
    "United Kingdom", "UK", "USA", "Mexico", "Canada", "Germany",
    "France", "Spain", "Italy", "London", "Paris", "Madrid", "Berlin",
)
JOBS = (
    "engineer", "scientist", "biologist", "teacher", "nurse", "doctor",
    "architect", "pilot", "chemist", "journalist", "lawyer", "designer",
)
SIGNS = (
    "Aries", "Taurus", "Gemini", "Cancer", "Leo", "Virgo",
    "Libra", "Scorpio", "Sagittarius", "Capricorn", "Aquarius", "Pisces",
)
TOPICS = ("science", "education", "banking", "technology", "politics", "sports")

_RELATIVE_DATE = (
    r"(?:a|an|one|two|three|four|five|six|seven|eight|nine|ten|\d{1,3})"
    r"\s+(?:day|week|month|year)s?\s+ago"
)
_DATE = re.compile(
    rf"\b(?:\d{{4}}-\d{{2}}-\d{{2}}|{_RELATIVE_DATE}|(?:19|20)\d{{2}})\b",
    re.IGNORECASE,
)
_AGE = re.compile(r"\b\d{1,3}\s+years?\s+old\b", re.IGNORECASE)


def _gazetteer(entries: tuple[str, ...], ignore_case: bool) -> re.Pattern[str]:
    ordered = sorted(entries, key=len, reverse=True)
    alternation = "|".join(re.escape(entry) for entry in ordered)
    return re.compile(rf"\b(?:{alternation})\b", re.IGNORECASE if ignore_case else 0)


class LexiconRecognizer:
    """Tags PERSON/LOCATION/JOB/SIGN/TOPIC/DATE/AGE spans."""

    def __init__(self) -> None:
        self._patterns: tuple[tuple[str, re.Pattern[str]], ...] = (
            ("PERSON", _gazetteer(PERSONS, ignore_case=False)),
            ("LOCATION", _gazetteer(LOCATIONS, ignore_case=False)),
            ("SIGN", _gazetteer(SIGNS, ignore_case=False)),
            ("JOB", _gazetteer(JOBS, ignore_case=True)),
            ("TOPIC", _gazetteer(TOPICS, ignore_case=True)),
            ("DATE", _DATE),
            ("AGE", _AGE),
        )

    def tag(self, text: str) -> list[Span]:
        spans = [
            Span(match.start(), match.end(), match.group(), label, MODEL)
            for label, pattern in self._patterns
            for match in pattern.finditer(text)
        ]
        return sorted(spans, key=lambda s: (s.start, s.end, s.label))

    def tag_many(self, texts: list[str], batch_size: int = 64) -> list[list[Span]]:
        return [self.tag(text) for text in texts]

"""Rule-based detectors for machine-readable identifiers.

Four rules — MAIL, URL, PHONE, POSTCODE — each a regular expression
applied left to right; matches of one rule never overlap each other.
The exact patterns are documented in the README. PHONE applies two
extra filters so digit runs that are really calendar dates or plain
numbers are not reported.
"""

from __future__ import annotations

import re

from .errors import ConfigError
from .spans import RULE, Span

RULE_NAMES = ("MAIL", "URL", "PHONE", "POSTCODE")

_MAIL = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")
_URL = re.compile(r"(?:https?://|www\.)[^\s<>\"']+")
_URL_TRAILING = ".,;:!?)"
_PHONE = re.compile(
    r"(?<![\w.-])"
    r"(?:\+\d{1,3}[\s.-]?)?"
    r"(?:\(\d{1,4}\)[\s.-]?)?"
    r"\d{2,4}(?:[\s.-]\d{2,4}){1,4}"
    r"(?![\w-])"
)
_DATE_SHAPED = re.compile(
    r"\d{4}[\s.-]\d{1,2}[\s.-]\d{1,2}|\d{1,2}[\s.-]\d{1,2}[\s.-]\d{4}"
)
_UK_POSTCODE = re.compile(r"\b[A-Z]{1,2}\d[A-Z\d]?\s?\d[A-Z]{2}\b")
_ZIP = re.compile(r"(?<![\w-])\d{5}(?:-\d{4})?(?![\w-])")


def _plausible_phone(text: str) -> bool:
    digits = sum(ch.isdigit() for ch in text)
    if not 7 <= digits <= 15:
        return False
    if _DATE_SHAPED.fullmatch(text):
        return False
    if text[0] in "+(":
        return True
    groups = re.split(r"[\s.-]", text)
    if len(groups) >= 3:
        return True
    # Bare two-group runs are kept only in the classic 3+4 local form,
    # so numeric ranges like "1000-2000" stay out.
    return len(groups) == 2 and len(groups[0]) == 3 and len(groups[1]) == 4


def _detect_mail(text: str) -> list[Span]:
    return [Span(m.start(), m.end(), m.group(), "MAIL", RULE) for m in _MAIL.finditer(text)]


def _detect_url(text: str) -> list[Span]:
    spans = []
    for match in _URL.finditer(text):
        value = match.group().rstrip(_URL_TRAILING)
        if value:
            spans.append(Span(match.start(), match.start() + len(value), value, "URL", RULE))
    return spans


def _detect_phone(text: str) -> list[Span]:
    return [
        Span(m.start(), m.end(), m.group(), "PHONE", RULE)
        for m in _PHONE.finditer(text)
        if _plausible_phone(m.group())
    ]


def _detect_postcode(text: str) -> list[Span]:
    spans = [Span(m.start(), m.end(), m.group(), "POSTCODE", RULE)
             for m in _UK_POSTCODE.finditer(text)]
    for match in _ZIP.finditer(text):
        candidate = Span(match.start(), match.end(), match.group(), "POSTCODE", RULE)
        if not any(candidate.overlaps(kept) for kept in spans):
            spans.append(candidate)
    return sorted(spans, key=lambda s: s.start)


_DETECTORS = {
    "MAIL": _detect_mail,
    "URL": _detect_url,
    "PHONE": _detect_phone,
    "POSTCODE": _detect_postcode,
}


def rule_detect(text: str, enabled: tuple[str, ...] = RULE_NAMES) -> list[Span]:
    """All rule spans in ``text``, in canonical rule order then position.

    Spans of one rule never overlap each other; overlaps across rules
    (an address inside a URL, say) are left to the caller's merge step.
    """
    unknown = [name for name in enabled if name not in _DETECTORS]
    if unknown:
        raise ConfigError(f"unknown rule detectors: {', '.join(sorted(unknown))}")
    spans: list[Span] = []
    for name in RULE_NAMES:
        if name in enabled:
            spans.extend(_DETECTORS[name](text))
    return spans

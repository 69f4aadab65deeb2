"""NER backend selection.

Three model identifiers: ``lexicon`` (the built-in recognizer),
``none`` (rule detectors only), and ``spacy:NAME`` which wraps an
installed spaCy pipeline and passes its entity labels through
unchanged (OntoNotes vocabulary for the stock English models). spaCy
is an optional dependency; if it or the named model is missing, the
error says so instead of silently tagging nothing.
"""

from __future__ import annotations

from .errors import ConfigError, ModelUnavailableError
from .lexicon import LexiconRecognizer
from .spans import MODEL, Span

LEXICON = "lexicon"
NONE = "none"
SPACY_PREFIX = "spacy:"


class SpacyRecognizer:
    def __init__(self, name: str) -> None:
        try:
            import spacy
        except ImportError as exc:
            raise ModelUnavailableError(
                f"model unavailable: spacy is not installed ({exc})"
            ) from exc
        try:
            self._nlp = spacy.load(name)
        except OSError as exc:
            raise ModelUnavailableError(
                f"model unavailable: cannot load spacy model {name!r} ({exc})"
            ) from exc

    def tag_many(self, texts: list[str], batch_size: int = 64) -> list[list[Span]]:
        return [
            [
                Span(ent.start_char, ent.end_char, ent.text, ent.label_, MODEL)
                for ent in doc.ents
            ]
            for doc in self._nlp.pipe(texts, batch_size=batch_size)
        ]


def build_recognizer(model: str):
    """Recognizer for a model identifier, or None for rules-only runs."""
    if model == NONE:
        return None
    if model == LEXICON:
        return LexiconRecognizer()
    if model.startswith(SPACY_PREFIX):
        return SpacyRecognizer(model[len(SPACY_PREFIX):])
    raise ConfigError(
        f"unknown model {model!r} (expected 'lexicon', 'none', or 'spacy:NAME')"
    )

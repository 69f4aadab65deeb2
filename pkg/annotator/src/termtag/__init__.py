"""Sensitive-term tagging for tabular text columns.

Produces span annotations (JSONL) over a dataset's textual cells by
combining an entity-recognizer backend with rule-based detectors for
machine-readable identifiers, resolving overlaps so the output is
directly consumable by the companion anonymization engine.
"""

from .annotate import AnnotatorConfig, annotate, load_textual_columns, write_annotations
from .backends import SpacyRecognizer, build_recognizer
from .errors import ConfigError, InputError, ModelUnavailableError, TermtagError
from .lexicon import LexiconRecognizer
from .rules import RULE_NAMES, rule_detect
from .spans import MODEL, RULE, Span, merge_spans

__all__ = [
    "AnnotatorConfig",
    "ConfigError",
    "InputError",
    "LexiconRecognizer",
    "MODEL",
    "ModelUnavailableError",
    "RULE",
    "RULE_NAMES",
    "SpacyRecognizer",
    "Span",
    "TermtagError",
    "annotate",
    "build_recognizer",
    "load_textual_columns",
    "merge_spans",
    "rule_detect",
    "write_annotations",
]

"""Exception types shared across the package."""


class TermtagError(Exception):
    """Base class for all errors raised by this package."""


class ModelUnavailableError(TermtagError):
    """The requested NER backend cannot be imported or loaded."""


class ConfigError(TermtagError):
    """Invalid annotator configuration (model, rules, columns)."""


class InputError(TermtagError):
    """Schema or dataset file is malformed or inconsistent."""

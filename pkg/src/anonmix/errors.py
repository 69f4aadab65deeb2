"""Exception types shared across the package."""


class AnonmixError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(AnonmixError):
    """Schema file is malformed or violates schema invariants."""


class DatasetError(AnonmixError):
    """Dataset file cannot be loaded or fails validation."""


class AnnotationError(AnonmixError):
    """Annotation file is malformed or inconsistent with the dataset."""


class ConfigError(AnonmixError):
    """Invalid run parameters (k, lambda, weights, entity filter)."""


class AuditError(AnonmixError):
    """A release failed the k-anonymity audit."""

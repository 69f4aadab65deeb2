"""Joint k-anonymization of relational and free-text attributes.

The package anonymizes datasets that mix relational columns with free
text: rows are grouped into a person-centric view, partitioned with a
weighted multidimensional splitter (or a greedy term-frequency
baseline), and recoded so that every equivalence class of at least k
persons shares identical generalized cells and retained terms.
"""

from .audit import AuditResult, audit_classes
from .context import GlobalContext, build_context
from .dgh import DateHierarchy
from .errors import (
    AnnotationError,
    AnonmixError,
    AuditError,
    ConfigError,
    DatasetError,
    SchemaError,
)
from .evaluate import EvalResult, evaluate_release
from .ingest import (
    Dataset,
    build_person_view,
    detect_redundant,
    filter_annotations,
    load_annotations,
    load_dataset,
    load_joined,
    term_matches_value,
)
from .metrics import LossReport, NcpWeights, ncp_dataset, partition_stats
from .partition import (
    SplitStats,
    choose_split,
    gdf_partition,
    mondrian_partition,
    normalized_span,
    textual_span,
)
from .pipeline import GDF, MONDRIAN, STRATEGIES, RunConfig, RunResult, run
from .records import (
    AnnotationSet,
    CategorySet,
    DateNode,
    NumericRange,
    Partition,
    PersonRecord,
    RecodedCell,
    Scalar,
    SensitiveTerm,
    TermKey,
)
from .recode import (
    EquivalenceClass,
    build_class,
    decide_term_retention,
    expand_release,
    recode_categorical,
    recode_date,
    recode_numeric,
    rewrite_text,
)
from .schema import (
    Attribute,
    AttributeKind,
    Schema,
    ValidationReport,
    load_schema,
    save_schema,
    schema_from_dict,
    schema_to_dict,
    validate_schema,
)

__version__ = "0.1.0"

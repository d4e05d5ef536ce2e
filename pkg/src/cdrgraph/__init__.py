"""cdrgraph: call/SMS record ingestion and multiplex social-network metrics.

Builds an edge-labeled directed multigraph from two-channel call detail
records and computes layer extraction, component statistics, node/link
overlap, layer Jaccard distance distributions, reciprocity and the
cross-layer dyad census. A seeded synthetic generator provides desk-scale
data with exact planted ground truth.
"""

__version__ = "0.1.0"

from .graph import (
    DIMENSIONS,
    CallLabel,
    Dimension,
    EdgeLabel,
    LayerGraph,
    Multigraph,
    SmsLabel,
    build_multigraph,
    read_edge_csv,
    write_edge_csv,
)
from .ingest import (
    CdrRecord,
    FilterConfig,
    IngestStats,
    PairStats,
    ParseError,
    aggregate_pairs,
    apply_significance,
    clean_stream,
    ingest,
    parse_record,
    read_cdr_file,
)
from .connectivity import (
    ComponentStats,
    SimpleDigraph,
    TableStats,
    component_stats,
    flatten,
    strongly_connected_components,
    weakly_connected_components,
)
from .overlap import (
    JaccardDistribution,
    LinkLabelCensus,
    NodeOverlapReport,
    jaccard_coefficient,
    jaccard_distribution,
    layer_jaccard,
    link_label_census,
    node_set_overlap,
)
from .reciprocity import (
    DYAD_CLASSES,
    ReciprocityReport,
    dyad_census,
    layer_reciprocity,
    multireciprocity,
    reciprocity_report,
)
from .synth import GroundTruth, SynthConfig, generate_cdrs, write_cdr_csv
from .reports import ReportSet
from .cli import RunConfig, run_pipeline

__all__ = [
    "__version__",
    "DIMENSIONS",
    "CallLabel",
    "Dimension",
    "EdgeLabel",
    "LayerGraph",
    "Multigraph",
    "SmsLabel",
    "build_multigraph",
    "read_edge_csv",
    "write_edge_csv",
    "CdrRecord",
    "FilterConfig",
    "IngestStats",
    "PairStats",
    "ParseError",
    "aggregate_pairs",
    "apply_significance",
    "clean_stream",
    "ingest",
    "parse_record",
    "read_cdr_file",
    "ComponentStats",
    "SimpleDigraph",
    "TableStats",
    "component_stats",
    "flatten",
    "strongly_connected_components",
    "weakly_connected_components",
    "JaccardDistribution",
    "LinkLabelCensus",
    "NodeOverlapReport",
    "jaccard_coefficient",
    "jaccard_distribution",
    "layer_jaccard",
    "link_label_census",
    "node_set_overlap",
    "DYAD_CLASSES",
    "ReciprocityReport",
    "dyad_census",
    "layer_reciprocity",
    "multireciprocity",
    "reciprocity_report",
    "GroundTruth",
    "SynthConfig",
    "generate_cdrs",
    "write_cdr_csv",
    "ReportSet",
    "RunConfig",
    "run_pipeline",
]

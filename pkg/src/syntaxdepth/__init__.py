"""Space-syntax depth measures, the d-value, and Hotelling's linear city."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    DEFAULT_ROOT,
    DegenerateGraph,
    DepthProfile,
    Disconnected,
    EmptyGraph,
    GraphError,
    RootMissing,
    SiteScore,
    SpaceRow,
    SpatialGraph,
    SyntaxReport,
    UnknownSpace,
    build_graph,
    depth,
    mean_depth,
    site_score,
    syntax_report,
    total_depth,
)
from .hotelling import (  # noqa: E402
    DemandSplit,
    Equilibrium,
    InvalidMarket,
    MarketConfig,
    NoConvergence,
    PricePair,
    UndercutRegime,
    best_response_solve,
    comparative_statics,
    demand_split,
    equilibrium,
    profits,
)
from .mapfile import (  # noqa: E402
    EmptyInput,
    FactLine,
    ParseDiagnostics,
    parse_csv_edges,
    parse_fact_file,
    to_edge_list,
)

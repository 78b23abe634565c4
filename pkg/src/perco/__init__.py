"""Monte Carlo toolkit for continuum percolation in weight-dependent
random connection models: sampling, graph construction, event estimation,
couplings, and renormalization diagnostics."""

from .config import (
    ParsedConfig,
    RunSettings,
    build_model,
    parse_config_file,
    parse_config_text,
    read_run_settings,
    serialize_config,
)
from .coupling import (
    CoupledPair,
    ThinningReport,
    check_thinning_bounds,
    coupled_graphs,
    induced_edges,
    thin_pair,
)
from .errors import (
    ConfigurationError,
    ContractError,
    InternalConsistencyError,
    PercoError,
    ResourceError,
    WindowCoverageError,
)
from .estimators import (
    Covering,
    CoveringCheck,
    Estimate,
    TrendReport,
    campbell_long_edges,
    campbell_total_edges,
    check_covering_inequality,
    covering_number,
    estimate_event,
    estimate_mixing_cov,
    geometric_grid,
    make_estimate,
    probe_long_edge_persistence,
    replicate_seed,
    sample_event_graph,
    truncation_bound,
    wilson_interval,
)
from .events import (
    CROSSING,
    LOCAL_CROSSING,
    LONG_EDGE,
    RENORM_LONG_EDGE,
    EventSpec,
    crossing_event,
    crossing_spec,
    local_crossing_event,
    local_crossing_spec,
    long_edge_event,
    long_edge_spec,
    renorm_long_edge_event,
    renorm_long_edge_spec,
)
from .graph import (
    GeomGraph,
    Region,
    ball_region,
    build_graph,
    complement_region,
    connected_regions,
    connected_regions_restricted,
    dump_graph,
)
from .models import (
    FrameworkReport,
    Kernel,
    ModelSpec,
    Profile,
    RadiusLaw,
    boolean_model,
    catalog,
    classical_model,
    connection_prob,
    connection_prob_ctx,
    custom_profile,
    demo_generalized,
    generalized_model,
    indicator_profile,
    mark_averaged_connection,
    max_range,
    pairwise_prob,
    phibar_breakpoints,
    phibar_support,
    polynomial_profile,
    validate_framework,
    weight_from_mark,
)
from .ppp import MarkedPoint, PointCloud, Window, ball_window, box_window, sample_ppp, window_volume
from .quadrature import RadialIntegral, radial_integral
from .renorm import (
    BracketResult,
    RenormRow,
    RenormTable,
    bracket_crossing_intensity,
    default_probe_scale,
    fitted_constant,
    renorm_table,
)
from .rng import mix, pair_uniforms, point_uniforms, substream

__all__ = [
    # errors
    "PercoError",
    "ConfigurationError",
    "ResourceError",
    "WindowCoverageError",
    "ContractError",
    "InternalConsistencyError",
    # point process
    "Window",
    "PointCloud",
    "MarkedPoint",
    "ball_window",
    "box_window",
    "sample_ppp",
    "window_volume",
    # randomness
    "mix",
    "substream",
    "pair_uniforms",
    "point_uniforms",
    # models
    "ModelSpec",
    "Kernel",
    "Profile",
    "RadiusLaw",
    "FrameworkReport",
    "boolean_model",
    "classical_model",
    "generalized_model",
    "indicator_profile",
    "polynomial_profile",
    "custom_profile",
    "weight_from_mark",
    "pairwise_prob",
    "connection_prob",
    "connection_prob_ctx",
    "mark_averaged_connection",
    "max_range",
    "phibar_support",
    "phibar_breakpoints",
    "validate_framework",
    "catalog",
    "demo_generalized",
    # quadrature
    "RadialIntegral",
    "radial_integral",
    # graphs
    "GeomGraph",
    "Region",
    "ball_region",
    "complement_region",
    "build_graph",
    "connected_regions",
    "connected_regions_restricted",
    "dump_graph",
    # events
    "EventSpec",
    "LONG_EDGE",
    "CROSSING",
    "LOCAL_CROSSING",
    "RENORM_LONG_EDGE",
    "long_edge_spec",
    "crossing_spec",
    "local_crossing_spec",
    "renorm_long_edge_spec",
    "long_edge_event",
    "crossing_event",
    "local_crossing_event",
    "renorm_long_edge_event",
    # estimators
    "Estimate",
    "TrendReport",
    "Covering",
    "CoveringCheck",
    "wilson_interval",
    "make_estimate",
    "replicate_seed",
    "sample_event_graph",
    "estimate_event",
    "geometric_grid",
    "probe_long_edge_persistence",
    "campbell_long_edges",
    "campbell_total_edges",
    "truncation_bound",
    "covering_number",
    "check_covering_inequality",
    "estimate_mixing_cov",
    # coupling
    "CoupledPair",
    "ThinningReport",
    "thin_pair",
    "coupled_graphs",
    "induced_edges",
    "check_thinning_bounds",
    # renormalization
    "RenormRow",
    "RenormTable",
    "BracketResult",
    "renorm_table",
    "fitted_constant",
    "bracket_crossing_intensity",
    "default_probe_scale",
    # configuration
    "ParsedConfig",
    "RunSettings",
    "parse_config_text",
    "parse_config_file",
    "serialize_config",
    "build_model",
    "read_run_settings",
]

__version__ = "0.1.0"

"""Bundle-aware coloring of edge-bundled graph layouts."""

from ._peacock import (
    Layout,
    OptimizerError,
    ParameterError,
    ParseError,
    PeacockError,
    StageError,
    ValidationError,
    baseline_colors,
    build_weight_matrix,
    color_dump_json,
    colors_to_display,
    detect_bundles,
    dissimilarity_matrix,
    fan_segments,
    gradient_color,
    load_layout,
    make_crossing_bundles,
    make_ordered_bundles,
    normalize_colors,
    optimize,
    parse_layout,
    render_svg,
    required_run_length,
    run_peacock,
    smacof_step,
    stress,
)

__all__ = [name for name in dir() if not name.startswith("_")]

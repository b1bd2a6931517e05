"""Zero-sum magic squares over finite abelian groups.

A square of side n over a group of order n^2 uses every element exactly once
with all rows, columns and both main diagonals summing to the same constant;
this package constructs the zero-constant ones whenever they exist (side
above 2 and no unique involution), proves impossibility otherwise, and ships
an independent search oracle for ground truth on small sides.
"""

from .build import (
    BuildResult,
    ConstructionTrace,
    build_zms,
    compose_swl,
    double_two_power,
    expand_dwl,
    replay_trace,
    zms_cyclic_odd,
    zms_h4_cyclic,
    zms_odd_prime_power,
    zms_rank2_odd,
    zms_two_power,
    zms_z2_cyclic,
)
from .certificate import ImpossibilityCertificate
from .classic import IntSquare, integer_ms, verify_int, zero_based
from .errors import BudgetError, BuildError, FormatError, ImpossibleError, ZmsqError
from .figures import figure, figure_constant
from .groups import (
    GroupProfile,
    GroupSpec,
    Isomorphism,
    abelian_group_specs,
    classify,
    parse_group,
    primary_split,
)
from .kotzig import (
    CompleteMapping,
    KotzigArray,
    build_kotzig,
    check_kotzig,
    complete_mapping,
    zero_sum_partition,
)
from .oracle import SearchReport, SpectrumReport, exhaustive_search, spectrum
from .squares import (
    DesignBlocks,
    Square,
    SumsReport,
    export_blocks,
    load_square,
    map_square,
    parse_text,
    render_text,
    square_from_json,
    translate,
    verify,
    zero_translate,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "BuildError",
    "BuildResult",
    "CompleteMapping",
    "ConstructionTrace",
    "DesignBlocks",
    "FormatError",
    "GroupProfile",
    "GroupSpec",
    "ImpossibilityCertificate",
    "ImpossibleError",
    "IntSquare",
    "Isomorphism",
    "KotzigArray",
    "SearchReport",
    "SpectrumReport",
    "Square",
    "SumsReport",
    "ZmsqError",
    "abelian_group_specs",
    "build_kotzig",
    "build_zms",
    "check_kotzig",
    "classify",
    "complete_mapping",
    "compose_swl",
    "double_two_power",
    "expand_dwl",
    "export_blocks",
    "figure",
    "figure_constant",
    "integer_ms",
    "load_square",
    "map_square",
    "parse_group",
    "parse_text",
    "primary_split",
    "render_text",
    "replay_trace",
    "spectrum",
    "square_from_json",
    "translate",
    "verify",
    "verify_int",
    "zero_based",
    "zero_sum_partition",
    "zero_translate",
    "zms_cyclic_odd",
    "zms_h4_cyclic",
    "zms_odd_prime_power",
    "zms_rank2_odd",
    "zms_two_power",
    "zms_z2_cyclic",
    "exhaustive_search",
]

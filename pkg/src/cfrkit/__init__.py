"""Zero skip-cost fractional-repetition storage codes from covering designs."""

from .designs import (
    Block,
    BlockSizeError,
    CoveringDesign,
    DesignError,
    DesignParams,
    ElementRangeError,
    ParseError,
    ProperLocality,
    is_properly_local,
    load_design,
    min_blocks_bound,
    multiply_design,
    parse_design,
    replication_bound,
    serialize_design,
    verify_covering,
)
from .skipcost import (
    ArrayFormatError,
    CapacityError,
    CfrArray,
    CodeReport,
    RepairPlan,
    Transmission,
    ZeroSkipResult,
    array_skip_cost,
    brute_force_column_repair_cost,
    build_report,
    column_repair_cost,
    default_locality,
    expansion_factor,
    format_ratio,
    is_zero_skip,
    parse_array,
    replication_profile,
    serialize_array,
    transmission_cost,
    zero_cost_plan,
)
from .constructions import (
    Case,
    ConstructionError,
    RecursiveFamilies,
    RecursiveParams,
    SizePrediction,
    asymptotic_expansion,
    construct_combination,
    construct_duplicate,
    construct_recursive,
    mod_bar,
    predict_recursive_size,
    recursive_block_families,
)
from .randomizer import (
    SearchConfig,
    SearchOutcome,
    Strategy,
    greedy_partition,
    random_ordering,
    search_zero_skip,
)

__version__ = "0.1.0"

"""Generative weaving-design workbench: weaving automata, rule-space metrics,
raster-to-weave conversion, and loom-draft compilation."""

__version__ = "0.1.0"

from .automata import (
    Boundary,
    EvolutionConfig,
    InitSpec,
    PatternGrid,
    RuleSpec,
    complement_rule,
    evolve,
    mirror_rule,
    rule_from_table,
    rule_from_wolfram_number,
    step,
)
from .draft import (
    Drawdown,
    FloatReport,
    LoomDraft,
    color_separate,
    drawdown_from_grid,
    factorize,
    float_report,
    render,
)
from .errors import (
    CapacityError,
    DomainError,
    ParseError,
    RepairError,
    ValidationError,
    WeavecraftError,
)
from .jsondoc import (
    Colorway,
    PatternDocument,
    decode_pattern_json,
    encode_pattern_json,
    sweep_to_csv,
    sweep_to_json,
)
from .metrics import (
    RuleMetrics,
    WeavabilityConfig,
    binary_entropy,
    block_entropy,
    compute_metrics,
    figure2_data,
    state_ratio,
    sweep_elementary,
    symbol_entropy,
    weaveability,
)
from .raster import (
    RasterConfig,
    RasterResult,
    load_image,
    rasterize,
    repair_floats,
    resample,
    weavable_rasterize,
)
from .wif import export_wif, parse_wif

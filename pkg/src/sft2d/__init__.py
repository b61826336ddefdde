"""Workbench for two-dimensional shifts of finite type.

Define tile sets via nearest-neighbor rules, count admissible blocks and
periodic points exactly, estimate growth-type invariants from finite-stage
tables, generate the hierarchical aperiodic tile-set family and Turing-machine
space-time SFTs, and encode reals as densities of computable bit sequences.
"""

__version__ = "0.1.0"

from .core import (
    Alphabet,
    LatticeBasis,
    Pattern,
    Sft2d,
    full_shift,
    hard_square,
    higher_block,
    is_locally_admissible,
    product,
    restrict,
)
from .enumeration import (
    BlockCount,
    ResourceLimitError,
    count_blocks,
    count_rect,
    periodic_points,
    sample_pattern,
)
from .invariants import (
    GrowthRow,
    GrowthTable,
    RecurrenceRow,
    density_bit,
    density_prefix,
    growth_table,
    recurrence_entdim,
    trend_report,
)
from .ruleio import ParseError, load, parse, save, serialize
from .turing import TuringMachine, load_tm, parse_tm, simulate_steps
from .constructions import (
    cluster_pattern,
    layered_extension,
    p_adic_xp,
    padic_projection,
    padic_reference_pattern,
    poly_growth_x,
    robinson_x2,
    tm_spacetime_sft,
    traffic_light_F,
    traffic_light_function,
    tsirelson_y,
)
from .hierarchy import (
    BitFn,
    RationalFn,
    density_estimates,
    encode_density,
    monotonize,
    verify_block_bound,
)
from .render import render_ascii, render_svg

__all__ = [name for name in dir() if not name.startswith("_")]

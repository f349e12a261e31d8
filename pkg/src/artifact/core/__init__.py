"""Shared numerics: multi-indices, truncated Taylor jets, cutoffs, grids, FFT."""

from .brackets import (
    bracket_of,
    bracket_peetre_harness,
    japanese_bracket,
    peetre_harness,
    separated_cone_harness,
)
from .cutoffs import CutoffFunction, smooth_step
from .grid import GridFunction, dual_half_widths, fourier
from .jets import Jet, apply_quadratic_power, derivative_map, jet_of, seed_jets
from .multiindex import (
    MultiIndex,
    MultiIndexRecord,
    multi_indices,
    multi_indices_of_order,
    multiindex_calc,
)

__all__ = [
    "MultiIndex",
    "MultiIndexRecord",
    "multiindex_calc",
    "multi_indices",
    "multi_indices_of_order",
    "Jet",
    "jet_of",
    "seed_jets",
    "derivative_map",
    "apply_quadratic_power",
    "CutoffFunction",
    "smooth_step",
    "GridFunction",
    "fourier",
    "dual_half_widths",
    "japanese_bracket",
    "bracket_of",
    "peetre_harness",
    "bracket_peetre_harness",
    "separated_cone_harness",
]

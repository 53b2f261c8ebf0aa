"""Detect quantum phase transitions through eLOCC convertibility of ground states.

The pipeline is: build a chain Hamiltonian (:mod:`elocc.models`), take its
lowest eigenvectors (:mod:`elocc.eigensolver`), cut the chain and read off
Schmidt spectra (:mod:`elocc.reduction`), then compare spectra through
majorization and Rényi entropies (:mod:`elocc.monotones`) across a parameter
sweep (:mod:`elocc.criticality`).
"""

__version__ = "0.1.0"

from .criticality import (
    Bracket,
    InterceptionTable,
    Pattern,
    ScalingFit,
    SweepResult,
    classify_pattern,
    critical_region,
    gs_vs_excited,
    interception_table,
    locate_boundary,
    ceil_tenth,
    refine_bracket,
    scaling_fit,
    split_index,
    sweep,
)
from .eigensolver import EigenPair, lowest_states
from .models import ModelSpec, PauliTerm, SparseOperator, build_ising, build_xxz, build_xy, parse_model
from .monotones import (
    AlphaGrid,
    ConversionVerdict,
    Direction,
    SchmidtVector,
    elocc_verdict,
    find_interceptions,
    locc_convertible,
    normalize_descending,
    renyi_entropy,
    tensor_product,
    verify_catalyst,
)
from .reduction import BipartitionSpec, comb, half_chain, schmidt_from_state

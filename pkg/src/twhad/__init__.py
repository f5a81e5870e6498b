"""Exact desk-scale tools relating treewidth and the Hadwiger number."""

from .circle import (
    ChordDiagram,
    Gf2Matrix,
    PerturbationModel,
    apply_perturbation,
    crossing_graph,
    evaluate_bounds,
    good_colour,
    perturbation_model_from_matrix,
    perturbed_separator_or_clique,
)
from .decomposition import (
    BalanceSpec,
    Separation,
    TreeDecomposition,
    exhaustive_balanced_separator,
    td_from_separator_oracle,
    td_validate,
    treewidth_exact,
)
from .dichotomy import DichotomyInput, extract_planar_high_tw, grid_dichotomy, k2s_in_strong_grid
from .errors import (
    InvalidArgument,
    NoSeparatorError,
    OracleContractError,
    ParseError,
    ResourceLimit,
    StructuralError,
    TwHadError,
    ValidationError,
)
from .graph import CyclicOrder, Graph, make_grid, make_path_power, make_strong_grid, subdivide
from .minors import (
    InducedMinorModel,
    MinorModel,
    contains_induced_minor,
    contains_minor,
    hadwiger,
    max_independent_set,
    menger_linkage,
    validate_model,
)
from .ordered import OrderedGraph, StringDiagram, is_x_free, outer_string_graph, xfree_separator_or_clique
from .vertexminors import apply_vm_sequence, local_complement, maxdeg3_vm_from_3subdivision, minor_to_vm_sequence

__version__ = "0.1.0"

"""Exact dynamics of finitely generated group actions on finite metric spaces.

Pseudo-orbits, shadowing, expansivity, chain and weak-chain recurrence,
sequential shadowing, spectral decomposition and Gromov-Hausdorff
distances between actions, all computed with rational arithmetic.
"""

__version__ = "0.1.0"

from .action import (
    GroupAction,
    affine_mod,
    conjugate_action,
    evaluate,
    flip_1_minus_x,
    generator_displacement,
    identity_map,
    inverse_action,
    matrix_mod,
    power_action,
    restrict,
)
from .chain import (
    chain_recurrent_set,
    chain_related,
    chain_relation,
    cr_core,
    is_chain_transitive,
    is_isolated_cr,
    is_weak_chain_transitive,
    sequentially_traced,
    spectral_decomposition,
    spo_windows,
    ssp_profile,
    step_graph,
    weak_chain_classes,
    weak_related,
)
from .covering import CoveringMap, lift_pseudo_orbit, project_pseudo_orbit, validate_cover
from .dynamics import (
    PseudoOrbit,
    ball_cover,
    enumerate_pseudo_orbits,
    exact_orbit,
    expansive_constant,
    fixed_sets_and_periodic,
    is_generator,
    is_transitive,
    lebesgue_number,
    nonwandering_core,
    nonwandering_set,
    pseudo_orbit_defect,
    separation_table,
    shadowing_profile,
    trace_search,
)
from .errors import *  # noqa: F401,F403
from .gh import (
    CandidateMap,
    equi_defect,
    gh_action_distance,
    gh_space_distance,
    iso_defect,
    lemma_4_5_horizon,
    strong_gh_distance,
    synthesize_semiconjugacy,
)
from .group_core import (
    CayleyBall,
    GeneratorSystem,
    RealizedElement,
    cayley_ball,
    full_group,
    joint_ball,
    kernel_witness,
    nonidentity_elements,
    word_length_constant,
)
from .ladder import ThresholdLadder, threshold_ladder
from .metric_space import (
    FiniteMetricSpace,
    bounded_distance,
    cycle,
    discrete,
    disjoint_union,
    hausdorff_distance,
    open_ball,
    set_distance,
    torus_grid,
)

"""Voting power and information aggregation toolkit.

Exact (rational-arithmetic) influence, effect and power indices for
monotone Boolean voting rules; the LP dichotomy deciding which monotone
anti-symmetric rules are weighted majorities, with adversarial-measure
synthesis in the negative case; tight aggregation lower bounds for
weighted majority under correlated votes; and the broadcast-tree
recursive-majority counterexample with exact and Monte Carlo
evaluation.
"""

from . import exceptions
from .boolfn import (
    BoolFn,
    Composed,
    RecursiveMajority,
    TruthTable,
    WeightedMajority,
    dictator,
    function_from_dict,
    function_to_dict,
    load_function,
    majority,
    save_function,
)
from .bounds import (
    BoundInput,
    Lemma1Report,
    TightnessReport,
    bound_lin,
    bound_prob,
    check_lemma1_on_instance,
    duplication_reduction,
    verify_tightness,
)
from .classify import (
    ClassifyResult,
    TauStar,
    ZeroHypergraph,
    adversarial_measure,
    classify,
    extract_weights,
    orbit_measure,
    tau_star,
    wm_oracle,
    zero_hypergraph,
)
from .exceptions import (
    DegenerateMarginal,
    InvalidInput,
    UnresolvedTie,
    VerificationFailed,
    VotepowerError,
)
from .ising import (
    Claim1Report,
    Claim2Bound,
    TreeParams,
    backend,
    bp_exact,
    claim1_margin,
    claim2_bound,
    leaf_joint_explicit,
    mc_effect,
    mc_mu_m,
)
from .measures import (
    AllSame,
    Explicit,
    IsingLeaves,
    Product,
    TMixture,
    as_explicit,
    enumerate_support,
    expect,
    is_fkg,
    load_measure,
    marginal,
    measure_from_dict,
    measure_to_dict,
    prob_of,
    sample,
    save_measure,
    tmixture_win_prob,
)
from .power import (
    PowerReport,
    banzhaf,
    covariance,
    effect,
    influence,
    power_report,
    shapley_shubik,
    shapley_shubik_by_permutations,
)
from .ratlp import LinearProgram, LPSolution, certified_solve, solve, verify

__version__ = "0.1.0"

__all__ = [
    "AllSame",
    "BoolFn",
    "BoundInput",
    "Claim1Report",
    "Claim2Bound",
    "ClassifyResult",
    "Composed",
    "DegenerateMarginal",
    "Explicit",
    "InvalidInput",
    "IsingLeaves",
    "Lemma1Report",
    "LinearProgram",
    "LPSolution",
    "PowerReport",
    "Product",
    "RecursiveMajority",
    "TMixture",
    "TauStar",
    "TightnessReport",
    "TreeParams",
    "TruthTable",
    "UnresolvedTie",
    "VerificationFailed",
    "VotepowerError",
    "WeightedMajority",
    "ZeroHypergraph",
    "adversarial_measure",
    "as_explicit",
    "backend",
    "banzhaf",
    "bound_lin",
    "bound_prob",
    "bp_exact",
    "certified_solve",
    "claim1_margin",
    "check_lemma1_on_instance",
    "classify",
    "claim2_bound",
    "covariance",
    "dictator",
    "duplication_reduction",
    "effect",
    "enumerate_support",
    "exceptions",
    "expect",
    "extract_weights",
    "function_from_dict",
    "function_to_dict",
    "influence",
    "is_fkg",
    "leaf_joint_explicit",
    "load_function",
    "load_measure",
    "majority",
    "marginal",
    "mc_effect",
    "mc_mu_m",
    "measure_from_dict",
    "measure_to_dict",
    "orbit_measure",
    "power_report",
    "prob_of",
    "sample",
    "save_function",
    "save_measure",
    "shapley_shubik",
    "shapley_shubik_by_permutations",
    "solve",
    "tau_star",
    "tmixture_win_prob",
    "verify",
    "verify_tightness",
    "wm_oracle",
    "zero_hypergraph",
]

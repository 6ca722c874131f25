"""Importance measures for binary coherent systems.

Structure functions (:mod:`relimp.structure`), the reliability polynomial
and Birnbaum importance (:mod:`relimp.reliability`), lifetime importance
(:mod:`relimp.lifetime`), structural importance and power indices
(:mod:`relimp.structural`), module importance (:mod:`relimp.modular`) and
voting game importance from a multilateral stopping game
(:mod:`relimp.voting`).
"""

from importlib import resources

from .errors import (
    CapacityError,
    ComputationError,
    DimensionError,
    EquilibriumError,
    InputError,
    ModularityError,
    NormalizationError,
    QuadratureError,
    RelimpError,
)
from .lifetime import (
    EmpiricalTable,
    Exponential,
    LifetimeModel,
    Weibull,
    birnbaum_lifetime,
    bp_instant,
    bp_interval,
    bp_interval_all,
    bp_total,
    bp_total_all,
    system_density,
    system_survival,
)
from .modular import (
    ModuleDecomposition,
    birnbaum_module_chain,
    bp_module,
    bp_module_all,
    bp_module_component,
    decompose,
    module_reliability,
)
from .reliability import ImportanceReport, birnbaum, birnbaum_all, compound_reliability_importance, reliability
from .structural import (
    banzhaf,
    banzhaf_all,
    birnbaum_structural,
    birnbaum_structural_all,
    bp_structural,
    bp_structural_all,
    critical_path_counts,
    shapley_shubik,
    shapley_shubik_all,
    structural_functioning_failure,
)
from .structure import (
    And,
    Atom,
    KOutOfN,
    Or,
    SimpleForm,
    StructureFunction,
    compose,
    dual,
    from_minimal_paths,
    from_two_terminal_graph,
    identity,
    k_out_of_n,
    parallel,
    series,
)
from .voting import EquilibriumSolution, StoppingGame, simulate, solve, verify_equilibrium, vgi

__version__ = "0.1.0"


def data_path(*parts: str):
    """Path to a bundled data file, e.g. ``data_path("systems", "gab.json")``."""
    return resources.files(__name__).joinpath("data", *parts)

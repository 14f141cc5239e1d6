"""markovia - graphical Markov models over finite and countable index sets."""

from .errors import (
    ConfigError,
    DomainError,
    IllConditionedError,
    MarkoviaError,
    ModelClassError,
    NumericError,
    SchemaError,
    SizeError,
)
from .config import DEFAULT_SETTINGS, RunConfig, Settings, load_json_config
from .report import Check, DiagnosticReport, Verdict, merge_reports
from .serialize import read_report, write_csv, write_report
from .graph import (
    LazyGraph,
    explicit_graph,
    graph_from_config,
    is_separator,
    lattice_graph,
    reach_avoiding,
)
from .graphoid import (
    Axiom,
    CIRelation,
    CIStatement,
    MarkovProperty,
    check_axiom,
    check_markov,
    equivalence_audit,
    pairwise_graph,
    relation_from_config,
    relation_from_discrete,
    relation_from_gaussian,
)
from .gaussian import (
    ARCovariance,
    LatticeKernel,
    conditional,
    conditional_convergence,
    eigen_bounds,
    fourier_symbol_min,
    g_recursion,
    model_from_config,
    verify_gaussian_conditions,
)
from .discrete import (
    IsingModel,
    MarkovChainSpec,
    chain_dcp_report,
    dcp_variance,
    ising_convergence,
    ising_convergence_report,
    ising_exact,
    ising_fmvn,
)
from .counterexamples import (
    ParityProcessSpec,
    ThetaShiftSpec,
    ma_shift_verdicts,
    parity_verdicts,
    theta_shift_verdicts,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "IllConditionedError",
    "MarkoviaError",
    "ModelClassError",
    "NumericError",
    "SchemaError",
    "SizeError",
    "DEFAULT_SETTINGS",
    "RunConfig",
    "Settings",
    "load_json_config",
    "Check",
    "DiagnosticReport",
    "Verdict",
    "merge_reports",
    "read_report",
    "write_csv",
    "write_report",
    "LazyGraph",
    "explicit_graph",
    "graph_from_config",
    "is_separator",
    "lattice_graph",
    "reach_avoiding",
    "Axiom",
    "CIRelation",
    "CIStatement",
    "MarkovProperty",
    "check_axiom",
    "check_markov",
    "equivalence_audit",
    "pairwise_graph",
    "relation_from_config",
    "relation_from_discrete",
    "relation_from_gaussian",
    "ARCovariance",
    "LatticeKernel",
    "conditional",
    "conditional_convergence",
    "eigen_bounds",
    "fourier_symbol_min",
    "g_recursion",
    "model_from_config",
    "verify_gaussian_conditions",
    "IsingModel",
    "MarkovChainSpec",
    "chain_dcp_report",
    "dcp_variance",
    "ising_convergence",
    "ising_convergence_report",
    "ising_exact",
    "ising_fmvn",
    "ParityProcessSpec",
    "ThetaShiftSpec",
    "ma_shift_verdicts",
    "parity_verdicts",
    "theta_shift_verdicts",
]

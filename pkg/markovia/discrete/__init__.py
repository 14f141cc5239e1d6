"""Binary processes: Ising models, two-state chains and decorrelation diagnostics."""

from .ising import (
    IsingConvergence,
    IsingModel,
    Regime,
    chain_ising,
    chain_summable,
    finite_ising,
    ising_conditional,
    ising_convergence,
    ising_convergence_report,
    ising_exact,
    ising_fmvn,
    ising_from_config,
    marginal_consistency,
    qualifying_index,
    sparse_chain,
)
from .sparse import PartialNormalizer, prefix_conditional_floor, sparse_ising_normalize
from .chain import (
    MarkovChainSpec,
    chain_from_config,
    chain_marginal,
    chain_pmf,
    random_chain_spec,
)
from .dcp import (
    chain_dcp_bound,
    chain_dcp_report,
    chain_dcp_trials,
    conditional_prefix,
    cylinder_event,
    dcp_trace,
    dcp_variance,
    last_one_tail,
    random_tail_event,
)

__all__ = [
    "IsingConvergence",
    "IsingModel",
    "Regime",
    "chain_ising",
    "chain_summable",
    "finite_ising",
    "ising_conditional",
    "ising_convergence",
    "ising_convergence_report",
    "ising_exact",
    "ising_fmvn",
    "ising_from_config",
    "marginal_consistency",
    "qualifying_index",
    "sparse_chain",
    "PartialNormalizer",
    "prefix_conditional_floor",
    "sparse_ising_normalize",
    "MarkovChainSpec",
    "chain_from_config",
    "chain_marginal",
    "chain_pmf",
    "random_chain_spec",
    "chain_dcp_bound",
    "chain_dcp_report",
    "chain_dcp_trials",
    "conditional_prefix",
    "cylinder_event",
    "dcp_trace",
    "dcp_variance",
    "last_one_tail",
    "random_tail_event",
]

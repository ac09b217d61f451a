"""netmix: group-structure exploration in networks with mixture models.

Two fitters share one graph model: a finite mixture over link patterns fit
by EM at a fixed group count, and a nonparametric mixture with a Chinese
Restaurant Process prior whose collapsed Gibbs sampler infers the group
count. Synthetic benchmark generators and NMI scoring round out the kit;
the ``netmix`` CLI ties it together.
"""

from ._backend import backend_name
from .bnpm import (
    GibbsState,
    PosteriorTrace,
    SamplerConfig,
    assign_node,
    crp_log_prob,
    fit_bnpm,
    gibbs_conditional,
    gibbs_sweep,
    joint_log_score,
    remove_node,
    sample_hyperparameters,
)
from .errors import (
    DataError,
    DegenerateNodeError,
    ModelError,
    NetmixError,
)
from .graph import (
    Graph,
    Partition,
    directed_links,
    load_edge_list,
    load_partition,
    validate,
    write_edge_list,
    write_partition,
)
from .metrics import NmiScore, confusion, group_count, nmi
from .nmm import (
    NmmState,
    e_step,
    expected_log_likelihood,
    fit_nmm,
    hard_partition,
    incomplete_log_likelihood,
    init_responsibilities,
    m_step,
)
from .synth import BlockSpec, gen_planted, gen_syn100, gen_syn108, gen_syn10000

__all__ = [
    "assign_node",
    "backend_name",
    "BlockSpec",
    "confusion",
    "crp_log_prob",
    "DataError",
    "DegenerateNodeError",
    "directed_links",
    "e_step",
    "expected_log_likelihood",
    "fit_bnpm",
    "fit_nmm",
    "gen_planted",
    "gen_syn100",
    "gen_syn108",
    "gen_syn10000",
    "gibbs_conditional",
    "gibbs_sweep",
    "GibbsState",
    "Graph",
    "group_count",
    "hard_partition",
    "incomplete_log_likelihood",
    "init_responsibilities",
    "joint_log_score",
    "load_edge_list",
    "load_partition",
    "m_step",
    "ModelError",
    "NetmixError",
    "nmi",
    "NmiScore",
    "NmmState",
    "Partition",
    "PosteriorTrace",
    "remove_node",
    "sample_hyperparameters",
    "SamplerConfig",
    "validate",
    "write_edge_list",
    "write_partition",
]

"""Policy diffusion analytics: adoption cascades, greedy diffusion-network
inference, adoption-hazard regression, and per-state network metrics,
exposed as a library, CLI, and read-only JSON API."""

__version__ = "0.1.0"

from .cascade import AdoptionStats, Cascade, CascadeSet, adoption_stats, build_cascades
from .ingest import (
    AdoptionRecord,
    AdoptionTable,
    CovariatePanel,
    PolicyMeta,
    filter_adoptions,
    impute_covariates,
    parse_adoption_data,
    parse_covariate_panel,
)
from .metrics import (
    StateMetricVector,
    closeness_centrality,
    contextual_measurement,
    degree_centrality,
    pagerank,
    quartile_bins,
    static_innovativeness,
)
from .netinf import (
    DiffusionEdge,
    DiffusionNetwork,
    InferenceParams,
    infer_network,
    log_transmission_weight,
    marginal_gain,
    policy_source_ties,
    vuong_pvalue,
)
from .survival import CoxFit, PersonPeriodTable, build_person_periods, fit_cox, hazard_report

__all__ = [
    "AdoptionRecord", "AdoptionTable", "PolicyMeta", "CovariatePanel",
    "parse_adoption_data", "parse_covariate_panel", "impute_covariates", "filter_adoptions",
    "Cascade", "CascadeSet", "AdoptionStats", "build_cascades", "adoption_stats",
    "InferenceParams", "DiffusionEdge", "DiffusionNetwork",
    "log_transmission_weight", "marginal_gain", "vuong_pvalue",
    "infer_network", "policy_source_ties",
    "PersonPeriodTable", "CoxFit", "build_person_periods", "fit_cox", "hazard_report",
    "StateMetricVector", "degree_centrality", "closeness_centrality", "pagerank",
    "static_innovativeness", "quartile_bins", "contextual_measurement",
    "__version__",
]

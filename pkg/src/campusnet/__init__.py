"""Analysis toolkit for attributed campus friendship networks.

Load a node-attribute table plus an edge list, extract the standard
views (Full, Student, Female, Male), and study how the six integer-coded
attributes relate to structure: assortativity, community detection with
modularity scoring, exact Rand z-scores of partitions against
attributes, dyad-level tie regressions, and tetrahedral summaries of
which attributes organize each network.
"""

__version__ = "0.1.0"

from .community import (METHOD_NAMES, LouvainCommunities, ModularityScore,
                        Partition, SpectralCommunities, detect_all, kl_refine,
                        louvain, modularity, spectral_partition)
from .compare import (AttributeComparison, ContingencyTable, ZScoreQuad,
                      attribute_partition, contingency, rand_coefficient,
                      rand_zscore, score_against_attributes)
from .dyad import (BoxStats, DyadDesign, DyadModelFit, DyadTieModel,
                   build_design, coefficient_summary, fit_ergm_mple,
                   fit_logistic)
from .errors import (CampusNetError, DegenerateInputError, GraphFormatError,
                     IdentifiabilityError, SeparationError)
from .figures import render_tetra_figure
from .graph import (ATTRIBUTE_FIELDS, MISSING, SCORED_ATTRIBUTES, VIEW_KINDS,
                    Network, NetworkView, Views, extract_views,
                    induced_subgraph, largest_connected_component,
                    load_network)
from .mixing import MixingMatrix, assortativity, mixing_matrix
from .pipeline import (BatchResult, InstitutionResult, PipelineConfig,
                       RunManifest, analyze_institution, batch,
                       load_config_file)
from .tetrahedron import (TETRA_VERTICES, VERTEX_ORDER, TetraPoint,
                          TetraSummary, barycentric_coordinates,
                          normalize_zscores, project_year_view,
                          summarize_runs, tetra_point)

__all__ = [
    "ATTRIBUTE_FIELDS", "MISSING", "SCORED_ATTRIBUTES", "VIEW_KINDS",
    "METHOD_NAMES", "TETRA_VERTICES", "VERTEX_ORDER", "__version__",
    "AttributeComparison", "BatchResult", "BoxStats", "CampusNetError",
    "ContingencyTable", "DegenerateInputError", "DyadDesign", "DyadModelFit",
    "DyadTieModel", "GraphFormatError", "IdentifiabilityError",
    "InstitutionResult", "LouvainCommunities", "MixingMatrix",
    "ModularityScore", "Network", "NetworkView", "Partition",
    "PipelineConfig", "RunManifest", "SeparationError", "SpectralCommunities",
    "TetraPoint", "TetraSummary", "Views", "ZScoreQuad",
    "analyze_institution", "assortativity", "attribute_partition", "batch",
    "barycentric_coordinates", "build_design", "coefficient_summary",
    "contingency", "detect_all", "extract_views", "fit_ergm_mple",
    "fit_logistic", "induced_subgraph", "kl_refine",
    "largest_connected_component", "load_config_file", "load_network",
    "louvain", "mixing_matrix", "modularity", "normalize_zscores",
    "project_year_view", "rand_coefficient", "rand_zscore",
    "render_tetra_figure", "score_against_attributes", "spectral_partition",
    "summarize_runs", "tetra_point",
]

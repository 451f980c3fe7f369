"""Community detection: partitions, modularity, detectors, refinement."""

from ._detect import METHOD_NAMES, detect_all
from ._estimators import LouvainCommunities, SpectralCommunities
from ._louvain import louvain
from ._partition import ModularityScore, Partition, modularity, modularity_value
from ._refine import kl_refine
from ._spectral import spectral_partition

__all__ = [
    "METHOD_NAMES",
    "LouvainCommunities",
    "ModularityScore",
    "Partition",
    "SpectralCommunities",
    "detect_all",
    "kl_refine",
    "louvain",
    "modularity",
    "modularity_value",
    "spectral_partition",
]

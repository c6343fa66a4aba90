"""The four partitioning algorithms and the contiguity audit."""

from ..partition import Partition, PartitionError
from .agglomerative import agglomerative_partition
from .common import is_contiguous
from .kmeans import kmeans_partition
from .louvain import LouvainParams, louvain_partition, modularity
from .sa import SAParams, sa_partition

__all__ = [
    "Partition",
    "PartitionError",
    "SAParams",
    "LouvainParams",
    "sa_partition",
    "agglomerative_partition",
    "louvain_partition",
    "kmeans_partition",
    "modularity",
    "is_contiguous",
]

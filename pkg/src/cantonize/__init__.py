"""Canton partitioning engine: politically homogeneous, geographically
contiguous groupings of municipalities from multi-election vote data."""

__version__ = "0.1.0"

from .distances import DistanceMatrix, Metric, distance, pairwise_matrix
from .evaluation import EvaluationReport, StabilityReport, ari, evaluate, nmi, silhouette, wcss
from .features import (
    FeatureMatrix,
    bloc_shares_features,
    nmf_features,
    pca_features,
    raw_party_features,
    standardize,
)
from .geograph import (
    BoundaryPolygon,
    ContiguityGraph,
    augment_graph,
    build_adjacency,
    edge_similarity_weights,
    parse_geojson,
    subset_graph,
)
from .ingest import (
    BLOCS,
    AlignedPanel,
    BlocMapping,
    ElectionDataset,
    align_panel,
    bloc_vote_shares,
    mean_bloc_shares,
    normalize_name,
    parse_alias_table,
    parse_bloc_mapping,
    parse_election_file,
)
from .objective import CostWeights, PartitionCost, balance, compactness, homogeneity, total_cost
from .partition import Partition
from .partitioners import (
    LouvainParams,
    SAParams,
    agglomerative_partition,
    is_contiguous,
    kmeans_partition,
    louvain_partition,
    sa_partition,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    enumerate_grid,
    load_data_dir,
    run_config,
    run_grid,
    run_stability,
    sa_seed_sweep,
)

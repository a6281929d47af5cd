"""Graph distances from optimal transport between Gaussian mixtures of node embeddings."""

from ._gmot import (
    EmbeddingConfig,
    Graph,
    baseline_degree,
    baseline_ev,
    gaussian_w2_full,
    gaussian_w2_scaled,
    gaussian_w2_tied,
    generate,
    hierarchical_order,
    knn_cv,
    load_graph,
    matrix_norm,
    mixture_distance,
    pairwise_distances,
    sample_embeddings,
    silhouette,
    solve_discrete_ot,
    synthetic_dataset,
)

__all__ = [
    "EmbeddingConfig",
    "Graph",
    "baseline_degree",
    "baseline_ev",
    "gaussian_w2_full",
    "gaussian_w2_scaled",
    "gaussian_w2_tied",
    "generate",
    "hierarchical_order",
    "knn_cv",
    "load_graph",
    "matrix_norm",
    "mixture_distance",
    "pairwise_distances",
    "sample_embeddings",
    "silhouette",
    "solve_discrete_ot",
    "synthetic_dataset",
]

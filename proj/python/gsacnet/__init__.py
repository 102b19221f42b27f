"""Furniture placement plausibility from scene graphs."""

from ._gsacnet import (
    GROUPS,
    ComputeError,
    DataError,
    GroupModel,
    Scene,
    augment,
    graph_edges,
    summary_vector,
    synthetic_corpus,
)

__all__ = [
    "GROUPS",
    "ComputeError",
    "DataError",
    "GroupModel",
    "Scene",
    "augment",
    "graph_edges",
    "summary_vector",
    "synthetic_corpus",
]

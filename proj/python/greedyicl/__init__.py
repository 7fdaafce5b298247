"""Greedy exact-ICL clustering of dynamic networks."""

from ._core import (
    ConfigError,
    DataError,
    DynamicNetwork,
    Hyperparameters,
    IclValue,
    Partition,
    delta_move,
    fit,
    icl,
    initialize,
    kmeans,
    nmi,
    read_edge_list,
    read_partition,
    refine,
    simulate,
    summarize,
    write_edge_list,
    write_partition,
)

__all__ = [
    "ConfigError",
    "DataError",
    "DynamicNetwork",
    "Hyperparameters",
    "IclValue",
    "Partition",
    "delta_move",
    "fit",
    "icl",
    "initialize",
    "kmeans",
    "nmi",
    "read_edge_list",
    "read_partition",
    "refine",
    "simulate",
    "summarize",
    "write_edge_list",
    "write_partition",
]

"""Node ranking versus cooperation in the evolutionary Prisoner's Dilemma on networks."""

__version__ = "0.1.0"

from netcoop.graph import (Graph, GraphStats, GraphError, GraphParseError, EmptyGraphError,
                           bfs_distances, load_edge_list, load_gml, stats, symmetrize)
from netcoop.ranking import (Algorithm, BinaryVector, RankVector, betweenness, binarize, closeness,
                             clustering_coefficient, compute, hits, pagerank, simple_degree)
from netcoop.game import GameParams, PayoffMatrix, Trajectory, run_game, run_realization
from netcoop.correlation import (hamming, kl_divergence, neighbor_mean, neighbor_variance,
                                 strategy1_series, strategy2_series, strategy3_series)

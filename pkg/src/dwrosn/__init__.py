"""Link-assignment and wavelength-routing simulator for a dual-layer (LEO + GEO) optical satellite network."""
from .config import ExperimentConfig
from .graph import hop_matrix, shortest_path_counts
from .las import (
    Scheme, act_assign, candidate_pool, combine_importance, generate_and_select, greedy_assign,
    importance_a, importance_b, peim_assign, tie_break_select,
)
from .metrics import avg_distance, connectivity, hop_distribution, utilization
from .orbital import ConstellationSpec, EciPosition, Layer, LayerSpec, SatelliteId, is_visible, position, visible_over_window
from .rwa import enumerate_candidate_paths, first_fit, path_delay, rwa_run
from .topology import (
    LinkClass, NodeSet, PotentialLinkMatrix, TopologySnapshot, build_potential_matrix, classify_link, is_connected,
    link_census,
)

__version__ = "0.1.0"

"""Littlewood-Richardson positivity via max flow on the hive model.

The triangular grid carries flow classes whose rhombus slacks stay
nonnegative; capacity achieving integral hive flows are counted by the
Littlewood-Richardson coefficient.  ``decide_scaling`` settles positivity
in polynomial time by capacity-scaling augmentation on the turn digraph,
``enumerate_P`` counts exactly at desk scale, and ``lr_count`` is the
independent tableau oracle everything is checked against.
"""

from ._kernels import backend_name
from .errors import (CapExceededError, FlowConsistencyError, GridMismatchError,
                     InvalidInstanceError)
from .flow import FlowClass, decompose, zero_flow
from .enumeration import (build_pz_graph, enumerate_P, find_secure_cycle,
                          multiplicity_free)
from .grid import (CapacityMap, EdgeId, Partition, Rhombus, Side, TriangleGrid,
                   TriangleId, Turn, TurnEdge, VertexId, border_capacities,
                   new_grid, slack_contribution_tables)
from .hives import Flatspace, HiveLabel, flatspaces, flow_to_hive, hive_to_flow
from .lr_oracle import lr_count, lr_positive
from .residual import (ResidualDigraph, TurnPath, build_R, project,
                       restrict_scaled, restrict_to_f, shortest_st_turnpath,
                       turnpath_slack)
from .solver import SolveReport, decide, decide_plain, decide_scaling, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "backend_name", "Partition", "TriangleGrid", "new_grid", "border_capacities",
    "CapacityMap", "VertexId", "TriangleId", "EdgeId", "Side", "Rhombus",
    "Turn", "TurnEdge", "FlowClass", "zero_flow", "decompose", "HiveLabel",
    "Flatspace", "flow_to_hive", "hive_to_flow", "flatspaces",
    "ResidualDigraph", "TurnPath", "build_R", "restrict_to_f", "restrict_scaled",
    "shortest_st_turnpath", "project", "turnpath_slack",
    "SolveReport", "decide", "decide_plain", "decide_scaling", "verify_certificate",
    "enumerate_P", "build_pz_graph", "find_secure_cycle", "multiplicity_free",
    "slack_contribution_tables",
    "lr_count", "lr_positive",
    "InvalidInstanceError", "GridMismatchError", "FlowConsistencyError",
    "CapExceededError",
    "__version__",
]

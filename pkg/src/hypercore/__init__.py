"""(k,g)-cores and (k,g,p)-cores of hypergraphs by peeling."""

from .errors import FormatError, HypercoreError, InvariantError, ParameterError
from .hypergraph import (
    EdgeFraction,
    Hypergraph,
    NodeSet,
    classify_edge,
    dump_hypergraph,
    dumps_hypergraph,
    fraction,
    g_neighbours,
    load_hypergraph,
    loads_hypergraph,
    parse_threshold,
    support,
)
from .kgcore import KgResult, kg_core
from .oracle import check_maximality, oracle_kg, oracle_kgp, toy_fixture
from .peel import CoreResult, asap, npa
from .report import Instrumentation, RunReport
from .table import SupportingTable, edge_lb, est_nbr_size, node_lb, update_sup_table

__version__ = "0.1.0"

"""Weight structures on finite sets: the lattice of metric-axiom classes,
adjoints between them, the topologies they generate, and the structure of
Met(X), all over exact extended rationals."""

from .adjoints import (
    AdjunctionId,
    galois_holds,
    inf_diag,
    met_meet,
    sym_join,
    sym_meet,
    tri_closure,
    zero_fix,
)
from .partitions import Partition, embed, part_join, part_meet, verify_embedding
from .search import PropertySpec, find_counterexample, run_demo
from .structures import (
    decompose_check,
    elementary_step,
    menger_convex,
    menger_star,
    pair_maximal,
    pair_minimal,
    pseudo_anti_atom,
    strict_between,
)
from .topology import FiniteTopology, SetCollection, classify, generate_topology, phi, psi, topo_join, topo_meet
from .weights import (
    INF,
    AxiomSet,
    Side,
    WeightStructure,
    ball,
    check_axioms,
    dual,
    pointwise_join,
    pointwise_meet,
    scale,
)

__version__ = "0.1.0"

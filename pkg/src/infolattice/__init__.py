"""Information lattices over sample-space partitions, their isomorphic
permutation-subgroup lattices, entropy/log-index vectors, and checking or
falsifying information laws on both sides of the correspondence."""

from .errors import CapacityError
from .partitions import (
    InfoElement,
    Partition,
    ProbabilitySpace,
    common_refinement,
    conditional_entropy,
    entropy,
    equivalence_witness,
    finest_common_coarsening,
    mutual_information,
    parse_partition,
    refines,
    rv_to_partition,
)
from .perm_groups import (
    PermGroup,
    Permutation,
    compose,
    coset_partition,
    enumerate_group,
    generated_join,
    group_order,
    intersection,
    inverse,
    normalized_log_index,
    orbit_partition,
    parse_cycles,
    partition_stabilizer,
    symmetric_group,
)
from .lattice import (
    Join,
    Lattice,
    Literal,
    Meet,
    SemilatticeVectors,
    dual_isomorphism_check,
    evaluate_term,
    export_hasse_dot,
    generate_lattice,
    log_index_vector,
    semilattice_vectors,
)
from .approximation import (
    ApproximationReport,
    DilationPlan,
    approximate,
    convergence_scan,
    dilate,
    log_index_of_partition,
    stirling_error_bound,
)
from .laws import (
    Counterexample,
    EvalResult,
    LawExpression,
    builtin_law,
    eval_on_partitions,
    eval_on_subgroups,
    falsify,
    parse_law,
    replay,
    verify_s5_counterexample,
)

__version__ = "0.1.0"

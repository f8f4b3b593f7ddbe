"""Generic lattice closure with pluggable join/meet, plus the two vector
functionals (entropy vector, normalized log-index vector) and the verifier
for the duality between information lattices and subgroup lattices.

One convention is fixed once and used everywhere: on the subgroup side the
information join corresponds to subgroup intersection and the information
meet to the generated join.  The map sending a stabilizer subgroup to its
orbit partition then reverses the operations, which is exactly what
``dual_isomorphism_check`` verifies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

from .errors import CapacityError
from . import perm_groups
from .partitions import (
    InfoElement,
    Partition,
    common_refinement,
    entropy,
    finest_common_coarsening,
)

DEFAULT_NODE_CAP = 4096
DEFAULT_VECTOR_CAP = 4096


# ---------------------------------------------------------------------------
# Lattice terms

@dataclass(frozen=True)
class Literal:
    index: int  # 1-based generator index


@dataclass(frozen=True)
class Join:
    left: "LatticeTerm"
    right: "LatticeTerm"


@dataclass(frozen=True)
class Meet:
    left: "LatticeTerm"
    right: "LatticeTerm"


LatticeTerm = Literal | Join | Meet


def term_text(term: LatticeTerm) -> str:
    """Render a term in the law DSL syntax (v = join, ^ = meet)."""
    if isinstance(term, Literal):
        return str(term.index)
    op = "v" if isinstance(term, Join) else "^"

    def side(t: LatticeTerm) -> str:
        if isinstance(t, Literal) or isinstance(t, type(term)):
            return term_text(t)
        return f"({term_text(t)})"

    return f"{side(term.left)}{op}{side(term.right)}"


def evaluate_term(term: LatticeTerm, assignment: Sequence,
                  join_fn: Callable, meet_fn: Callable):
    """Recursively evaluate a term; literals are 1-based into the assignment."""
    if isinstance(term, Literal):
        if not 1 <= term.index <= len(assignment):
            raise ValueError(
                f"literal {term.index} out of range 1..{len(assignment)}"
            )
        return assignment[term.index - 1]
    left = evaluate_term(term.left, assignment, join_fn, meet_fn)
    right = evaluate_term(term.right, assignment, join_fn, meet_fn)
    return join_fn(left, right) if isinstance(term, Join) else meet_fn(left, right)


# ---------------------------------------------------------------------------
# Lattice closure

@dataclass
class Lattice:
    """Closure of a generating set under join/meet callbacks.

    ``nodes`` is in discovery order (generators first); the tables map node
    index pairs to node indices; ``hasse_edges`` is the cover relation of the
    order a <= b iff meet(a, b) = a.
    """

    nodes: list
    generator_indices: tuple[int, ...]
    join_table: list[list[int]]
    meet_table: list[list[int]]
    hasse_edges: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def leq(self, i: int, j: int) -> bool:
        return self.meet_table[i][j] == i

    def to_json(self, labeler: Callable = str) -> dict:
        return {
            "nodes": [labeler(x) for x in self.nodes],
            "generator_indices": list(self.generator_indices),
            "join_table": self.join_table,
            "meet_table": self.meet_table,
            "hasse_edges": [list(e) for e in self.hasse_edges],
        }


def generate_lattice(generators: Sequence, join_fn: Callable, meet_fn: Callable,
                     node_cap: int = DEFAULT_NODE_CAP,
                     key: Callable = lambda x: x) -> Lattice:
    """Worklist closure of the generators under both binary operations.

    ``key`` maps an element to its canonical hashable identity (the element
    itself for partitions; an element-set key for groups).  Fails loudly with
    CapacityError at node_cap.
    """
    if not generators:
        raise ValueError("need at least one generator")
    nodes: list = []
    index: dict = {}

    def intern(x) -> int:
        k = key(x)
        if k in index:
            return index[k]
        if len(nodes) >= node_cap:
            raise CapacityError(f"lattice closure exceeds node cap of {node_cap}")
        nodes.append(x)
        index[k] = len(nodes) - 1
        return len(nodes) - 1

    gen_idx = tuple(intern(g) for g in generators)
    joins: dict[tuple[int, int], int] = {}
    meets: dict[tuple[int, int], int] = {}
    done = 0
    while done < len(nodes):
        hi = len(nodes)
        for i in range(hi):
            for j in range(max(i, done), hi):
                if (i, j) not in joins:
                    joins[(i, j)] = intern(join_fn(nodes[i], nodes[j]))
                    meets[(i, j)] = intern(meet_fn(nodes[i], nodes[j]))
        done = hi

    n = len(nodes)
    join_table = [[0] * n for _ in range(n)]
    meet_table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            join_table[i][j] = join_table[j][i] = joins[(i, j)]
            meet_table[i][j] = meet_table[j][i] = meets[(i, j)]

    less = [[meet_table[i][j] == i and i != j for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if less[i][j] and not any(less[i][k] and less[k][j] for k in range(n)):
                edges.append((i, j))
    return Lattice(nodes, gen_idx, join_table, meet_table, tuple(edges))


def export_hasse_dot(lat: Lattice, labeler: Callable = str) -> str:
    """DOT digraph of the cover relation, drawn bottom-up; deterministic."""
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i, node in enumerate(lat.nodes):
        lines.append(f'  n{i} [label="{labeler(node)}"];')
    for a, b in sorted(lat.hasse_edges):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Semilattice vectors

Slot = tuple[str, tuple[int, ...]]  # ("join" | "meet", 1-based subset)


def semilattice_slots(n: int) -> tuple[Slot, ...]:
    """Slot order: all joins m^alpha by subset size then lexicographically
    (singletons counted once, as joins), then all meets m_beta with |beta| >= 2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    subsets = [
        tuple(c)
        for size in range(1, n + 1)
        for c in combinations(range(1, n + 1), size)
    ]
    slots = [("join", s) for s in subsets]
    slots += [("meet", s) for s in subsets if len(s) >= 2]
    return tuple(slots)


def slot_label(slot: Slot) -> str:
    kind, subset = slot
    sep = "v" if kind == "join" else "^"
    return sep.join(str(i) for i in subset)


@dataclass(frozen=True)
class SemilatticeVectors:
    """Aligned vector of values over the join- and meet-semilattice slots."""

    n: int
    slots: tuple[Slot, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        expect = 2 ** (self.n + 1) - self.n - 2
        if len(self.slots) != expect or len(self.values) != expect:
            raise ValueError(
                f"vector for n={self.n} must have length {expect}"
            )

    def labeled(self) -> list[tuple[str, float]]:
        return [(slot_label(s), v) for s, v in zip(self.slots, self.values)]


def _check_vector_size(n: int, cap: int) -> None:
    length = 2 ** (n + 1) - n - 2
    if length > cap:
        raise CapacityError(
            f"semilattice vector for n={n} has {length} entries, cap is {cap}"
        )


def derived_partitions(generators: Sequence[Partition],
                       slots: Sequence[Slot]) -> list[Partition]:
    """Partition for each slot: iterated join (common refinement) over alpha,
    iterated meet (finest common coarsening) over beta."""
    join_memo: dict[tuple[int, ...], Partition] = {}
    meet_memo: dict[tuple[int, ...], Partition] = {}

    def fold(subset: tuple[int, ...], op, memo) -> Partition:
        if subset in memo:
            return memo[subset]
        if len(subset) == 1:
            result = generators[subset[0] - 1]
        else:
            result = op(fold(subset[:-1], op, memo), generators[subset[-1] - 1])
        memo[subset] = result
        return result

    out = []
    for kind, subset in slots:
        op = common_refinement if kind == "join" else finest_common_coarsening
        memo = join_memo if kind == "join" else meet_memo
        out.append(fold(subset, op, memo))
    return out


def semilattice_vectors(elements: Sequence[InfoElement],
                        vector_cap: int = DEFAULT_VECTOR_CAP) -> SemilatticeVectors:
    """Entropy vector over all joint and common information elements, natural log."""
    if not elements:
        raise ValueError("need at least one element")
    space = elements[0].space
    for e in elements:
        if e.space != space:
            raise ValueError("all elements must share one probability space")
    n = len(elements)
    _check_vector_size(n, vector_cap)
    slots = semilattice_slots(n)
    parts = derived_partitions([e.partition for e in elements], slots)
    values = tuple(entropy(InfoElement(p, space)) for p in parts)
    return SemilatticeVectors(n, slots, values)


def log_index_vector(groups: Sequence[perm_groups.PermGroup], ambient_order: int,
                     degree: int, group_cap: int = perm_groups.DEFAULT_GROUP_CAP,
                     vector_cap: int = DEFAULT_VECTOR_CAP) -> SemilatticeVectors:
    """Normalized log-index vector aligned with the entropy vector.

    Dual convention: a join slot evaluates to the subgroup intersection, a
    meet slot to the generated join.
    """
    if not groups:
        raise ValueError("need at least one group")
    for g in groups:
        if g.degree != degree:
            raise ValueError(f"group degree {g.degree} != {degree}")
    n = len(groups)
    _check_vector_size(n, vector_cap)
    slots = semilattice_slots(n)

    memo: dict[Slot, perm_groups.PermGroup] = {}

    def fold(kind: str, subset: tuple[int, ...]) -> perm_groups.PermGroup:
        slot = (kind, subset)
        if slot in memo:
            return memo[slot]
        if len(subset) == 1:
            result = groups[subset[0] - 1]
        elif kind == "join":
            result = perm_groups.intersection(
                fold(kind, subset[:-1]), groups[subset[-1] - 1], group_cap
            )
        else:
            result = perm_groups.generated_join(
                [fold(kind, subset[:-1]), groups[subset[-1] - 1]]
            )
        memo[slot] = result
        return result

    values = []
    for kind, subset in slots:
        sub = fold(kind, subset)
        values.append(
            perm_groups.normalized_log_index(
                ambient_order, perm_groups.group_order(sub, group_cap), degree
            )
        )
    return SemilatticeVectors(n, slots, tuple(values))


# ---------------------------------------------------------------------------
# Dual isomorphism verifier (information lattice vs stabilizer subgroup lattice)

@dataclass(frozen=True)
class DualIsoReport:
    ok: bool
    info_nodes: int
    group_nodes: int
    failures: tuple[str, ...]


def dual_isomorphism_check(generators: Sequence[Partition],
                           node_cap: int = DEFAULT_NODE_CAP,
                           group_cap: int = perm_groups.DEFAULT_GROUP_CAP) -> DualIsoReport:
    """Verify that subgroup -> orbit partition is a bijection from the
    stabilizer subgroup lattice onto the information lattice, sending
    intersection to common refinement and generated join to finest common
    coarsening.
    """
    if not generators:
        raise ValueError("need at least one generator")
    ground = generators[0].ground_size
    for p in generators:
        if p.ground_size != ground:
            raise ValueError("generators must share one ground set")

    info = generate_lattice(
        list(generators), common_refinement, finest_common_coarsening, node_cap
    )
    stabs = [perm_groups.partition_stabilizer(p) for p in generators]
    groups = generate_lattice(
        stabs,
        lambda a, b: perm_groups.generated_join([a, b]),
        lambda a, b: perm_groups.intersection(a, b, group_cap),
        node_cap,
        key=lambda g: perm_groups.group_images(g, group_cap),
    )

    failures: list[str] = []
    info_index = {p: i for i, p in enumerate(info.nodes)}
    phi: list[int | None] = []
    for gi, g in enumerate(groups.nodes):
        image = perm_groups.orbit_partition(g)
        if image not in info_index:
            failures.append(f"orbit of group node {gi} not an information node: {image}")
            phi.append(None)
        else:
            phi.append(info_index[image])

    mapped = [p for p in phi if p is not None]
    if len(set(mapped)) != len(mapped):
        failures.append("orbit map is not injective")
    if len(groups.nodes) != len(info.nodes):
        failures.append(
            f"node counts differ: {len(groups.nodes)} groups vs {len(info.nodes)} partitions"
        )

    if not failures:
        for i in range(len(groups.nodes)):
            for j in range(i, len(groups.nodes)):
                want_join = common_refinement(info.nodes[phi[i]], info.nodes[phi[j]])
                got = phi[groups.meet_table[i][j]]
                if info.nodes[got] != want_join:
                    failures.append(
                        f"intersection of nodes ({i},{j}) maps to "
                        f"{info.nodes[got]}, expected join {want_join}"
                    )
                want_meet = finest_common_coarsening(info.nodes[phi[i]], info.nodes[phi[j]])
                got = phi[groups.join_table[i][j]]
                if info.nodes[got] != want_meet:
                    failures.append(
                        f"generated join of nodes ({i},{j}) maps to "
                        f"{info.nodes[got]}, expected meet {want_meet}"
                    )

    return DualIsoReport(
        ok=not failures,
        info_nodes=len(info.nodes),
        group_nodes=len(groups.nodes),
        failures=tuple(failures),
    )

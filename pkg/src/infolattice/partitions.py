"""Information elements as sample-space partitions.

A finite probability space with exact rational point masses plus a set
partition of its sample space is the concrete identity of an information
element: two random variables carry the same information exactly when they
induce the same partition.  This module provides the partition algebra
(refinement order, common refinement, finest common coarsening) and the
entropy functionals on top of it.

Convention used throughout the package: a *finer* partition is a *richer*
information element.  The information join of two elements is the common
refinement of their partitions; the information meet (Gács–Körner common
information) is the finest common coarsening, computed by transitive
closure (union-find).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise ValueError(
            "probabilities must be exact rationals (int, Fraction, or 'p/q' "
            f"string), not float: {value!r}"
        )
    return Fraction(value)


@dataclass(frozen=True)
class ProbabilitySpace:
    """Finite sample space {1..size} with exact rational point probabilities."""

    probs: tuple[Fraction, ...]

    def __init__(self, probs: Iterable) -> None:
        probs = tuple(_as_fraction(p) for p in probs)
        if not probs:
            raise ValueError("probability space needs at least one point")
        for i, p in enumerate(probs, 1):
            if p <= 0:
                raise ValueError(f"point {i} has non-positive probability {p}")
        total = sum(probs)
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected exactly 1")
        object.__setattr__(self, "probs", probs)

    @property
    def size(self) -> int:
        return len(self.probs)

    @classmethod
    def uniform(cls, size: int) -> "ProbabilitySpace":
        if size < 1:
            raise ValueError("size must be >= 1")
        return cls([Fraction(1, size)] * size)

    def to_json(self) -> dict:
        return {"size": self.size, "probs": [str(p) for p in self.probs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ProbabilitySpace":
        space = cls(data["probs"])
        if "size" in data and int(data["size"]) != space.size:
            raise ValueError(
                f"declared size {data['size']} != number of probabilities {space.size}"
            )
        return space


class Partition:
    """Set partition of {1..ground_size} in canonical form.

    Blocks are stored sorted internally and ordered by their minimum element,
    so structural equality and hashing coincide with partition equality.
    """

    __slots__ = ("ground_size", "blocks")

    def __init__(self, ground_size: int, blocks: Iterable[Iterable[int]]) -> None:
        if ground_size < 1:
            raise ValueError("ground_size must be >= 1")
        canon = []
        seen: set[int] = set()
        for raw in blocks:
            block = tuple(sorted(int(x) for x in raw))
            if not block:
                raise ValueError("empty block")
            for x in block:
                if not 1 <= x <= ground_size:
                    raise ValueError(f"element {x} out of range 1..{ground_size}")
                if x in seen:
                    raise ValueError(f"duplicate element {x}")
                seen.add(x)
            canon.append(block)
        if len(seen) != ground_size:
            missing = sorted(set(range(1, ground_size + 1)) - seen)
            raise ValueError(f"missing elements: {missing}")
        canon.sort(key=lambda b: b[0])
        self.ground_size = ground_size
        self.blocks = tuple(canon)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and self.ground_size == other.ground_size
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.ground_size, self.blocks))

    def __str__(self) -> str:
        return "|".join(",".join(str(x) for x in b) for b in self.blocks)

    def __repr__(self) -> str:
        return f"Partition({self.ground_size}, {str(self)!r})"

    def block_index(self) -> dict[int, int]:
        """Map each point to the index of its block."""
        idx = {}
        for i, block in enumerate(self.blocks):
            for x in block:
                idx[x] = i
        return idx

    def to_json(self) -> dict:
        return {"ground_size": self.ground_size, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Partition":
        return cls(int(data["ground_size"]), data["blocks"])


@dataclass(frozen=True)
class InfoElement:
    """A partition together with the probability space it lives on."""

    partition: Partition
    space: ProbabilitySpace

    def __post_init__(self) -> None:
        if self.partition.ground_size != self.space.size:
            raise ValueError(
                f"partition ground size {self.partition.ground_size} != "
                f"space size {self.space.size}"
            )


def discrete_partition(ground_size: int) -> Partition:
    return Partition(ground_size, [[i] for i in range(1, ground_size + 1)])


def indiscrete_partition(ground_size: int) -> Partition:
    return Partition(ground_size, [range(1, ground_size + 1)])


def parse_partition(text: str, ground_size: int) -> Partition:
    """Parse block notation like ``"1,2|3|4"`` into a canonical Partition."""
    blocks = []
    for chunk in text.split("|"):
        items = [s for s in (piece.strip() for piece in chunk.split(",")) if s]
        if not items:
            raise ValueError(f"empty block in {text!r}")
        try:
            blocks.append([int(s) for s in items])
        except ValueError:
            raise ValueError(f"non-integer element in {text!r}") from None
    return Partition(ground_size, blocks)


def _check_same_ground(p: Partition, q: Partition) -> None:
    if p.ground_size != q.ground_size:
        raise ValueError(
            f"ground-size mismatch: {p.ground_size} != {q.ground_size}"
        )


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of p is contained in some block of q.

    A finer partition is a richer information element.
    """
    _check_same_ground(p, q)
    qidx = q.block_index()
    for block in p.blocks:
        target = qidx[block[0]]
        if any(qidx[x] != target for x in block):
            return False
    return True


def common_refinement(p: Partition, q: Partition) -> Partition:
    """Coarsest partition refining both: nonempty pairwise block intersections.

    This is the information *join* (joint information element).
    """
    _check_same_ground(p, q)
    qidx = q.block_index()
    blocks = []
    for block in p.blocks:
        pieces: dict[int, list[int]] = {}
        for x in block:
            pieces.setdefault(qidx[x], []).append(x)
        blocks.extend(pieces.values())
    return Partition(p.ground_size, blocks)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int) -> None:
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def finest_common_coarsening(p: Partition, q: Partition) -> Partition:
    """Finest partition coarsened by both, by transitive closure.

    Merges any two points that share a block in either input; this is the
    information *meet* (Gács–Körner common information element).
    """
    _check_same_ground(p, q)
    uf = _UnionFind(p.ground_size)
    for part in (p, q):
        for block in part.blocks:
            first = block[0]
            for x in block[1:]:
                uf.union(first, x)
    groups: dict[int, list[int]] = {}
    for x in range(1, p.ground_size + 1):
        groups.setdefault(uf.find(x), []).append(x)
    return Partition(p.ground_size, groups.values())


def rv_to_partition(labels: Sequence) -> Partition:
    """Partition induced by a random variable given as its list of state labels.

    Blocks are the preimage classes of equal labels.
    """
    if not labels:
        raise ValueError("empty label list")
    groups: dict = {}
    for i, lab in enumerate(labels, 1):
        groups.setdefault(lab, []).append(i)
    return Partition(len(labels), groups.values())


def equivalence_witness(labels1: Sequence, labels2: Sequence):
    """Bijection f with labels2 = f(labels1) if the two variables are
    informationally equivalent, else None.

    Equivalence means the induced partitions coincide; the witness is the
    unique relabeling restricted to labels that actually occur.
    """
    if len(labels1) != len(labels2):
        raise ValueError(
            f"length mismatch: {len(labels1)} != {len(labels2)}"
        )
    if rv_to_partition(labels1) != rv_to_partition(labels2):
        return None
    return {a: b for a, b in zip(labels1, labels2)}


def block_probability(space: ProbabilitySpace, block: Sequence[int]) -> Fraction:
    return sum((space.probs[x - 1] for x in block), Fraction(0))


_LN2 = math.log(2)


def _base_scale(base) -> float:
    if base in ("natural", "e", math.e):
        return 1.0
    if base in (2, "2"):
        return _LN2
    raise ValueError(f"unsupported base {base!r} (use 'natural' or 2)")


def entropy(element: InfoElement, base="natural") -> float:
    """Shannon entropy of an information element, natural log by default."""
    scale = _base_scale(base)
    total = 0.0
    for block in element.partition.blocks:
        pr = float(block_probability(element.space, block))
        total -= pr * math.log(pr)
    total /= scale
    return 0.0 if total == 0.0 else total


def conditional_entropy(q: Partition, p: Partition, space: ProbabilitySpace,
                        base="natural") -> float:
    """H(q | p) = H(join of p and q) - H(p); zero exactly when p refines q."""
    _check_same_ground(q, p)
    joint = common_refinement(p, q)
    return entropy(InfoElement(joint, space), base) - entropy(InfoElement(p, space), base)


def mutual_information(p: Partition, q: Partition, space: ProbabilitySpace,
                       base="natural") -> float:
    """I(p; q) = H(p) + H(q) - H(join of p and q)."""
    _check_same_ground(p, q)
    joint = common_refinement(p, q)
    return (
        entropy(InfoElement(p, space), base)
        + entropy(InfoElement(q, space), base)
        - entropy(InfoElement(joint, space), base)
    )


def all_partitions(ground_size: int) -> list[Partition]:
    """All partitions of {1..ground_size} in deterministic order.

    Enumerated via restricted-growth strings, so the count is the Bell number.
    Intended for exhaustive verification on small ground sets.
    """
    if ground_size < 1:
        raise ValueError("ground_size must be >= 1")
    result = []

    def extend(assign: list[int], n_blocks: int) -> None:
        if len(assign) == ground_size:
            blocks: list[list[int]] = [[] for _ in range(n_blocks)]
            for i, b in enumerate(assign, 1):
                blocks[b].append(i)
            result.append(Partition(ground_size, blocks))
            return
        for b in range(n_blocks):
            extend(assign + [b], n_blocks)
        extend(assign + [n_blocks], n_blocks + 1)

    extend([0], 1)
    return result

"""Permutations and finitely generated permutation groups on the sample space.

Groups are given by generators and enumerated on demand with a plain BFS
closure under composition (desk-scale degrees; a configurable element cap
turns blowups into explicit CapacityError).  The bridge back to information
elements is the orbit partition; the bridge forward is the stabilizer of a
partition, whose order is the product of block-size factorials.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import CapacityError
from .partitions import Partition, _UnionFind

DEFAULT_GROUP_CAP = 1_000_000

Image = tuple[int, ...]


class Permutation:
    """Bijection of {1..degree}, stored as the image array sigma(1..n)."""

    __slots__ = ("image",)

    def __init__(self, image: Iterable[int]) -> None:
        image = tuple(int(x) for x in image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"not a bijection of 1..{len(image)}: {image}")
        self.image = image

    @classmethod
    def _trusted(cls, image: Image) -> "Permutation":
        p = object.__new__(cls)
        p.image = image
        return p

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __lt__(self, other: "Permutation") -> bool:
        return self.image < other.image

    def __repr__(self) -> str:
        return f"Permutation({cycle_notation(self)!r}, degree={self.degree})"


def identity(degree: int) -> Permutation:
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return Permutation._trusted(tuple(range(1, degree + 1)))


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse standard cycle notation, e.g. ``"(1 2 3)(4 5)"``; ``"()"`` is the identity.

    Each cycle entry maps to its successor; points not mentioned are fixed.
    Cycles must be disjoint.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    image = list(range(0, degree + 1))  # image[i] = sigma(i), slot 0 unused
    seen: set[int] = set()
    i, n = 0, len(text)
    found_any = False
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise ValueError(f"expected '(' at position {i} in {text!r}")
        close = text.find(")", i + 1)
        if close < 0:
            raise ValueError(f"unclosed '(' at position {i} in {text!r}")
        body = text[i + 1:close].replace(",", " ").split()
        found_any = True
        try:
            entries = [int(s) for s in body]
        except ValueError:
            raise ValueError(f"non-integer entry in cycle {text[i:close + 1]!r}") from None
        for x in entries:
            if not 1 <= x <= degree:
                raise ValueError(f"point {x} out of range 1..{degree}")
            if x in seen:
                raise ValueError(f"repeated point {x} in {text!r}")
            seen.add(x)
        for a, b in zip(entries, entries[1:] + entries[:1]):
            image[a] = b
        i = close + 1
    if not found_any:
        raise ValueError(f"no cycles found in {text!r}")
    return Permutation._trusted(tuple(image[1:]))


def cycle_notation(p: Permutation) -> str:
    """Cycle string for a permutation; fixed points omitted, identity is "()"."""
    remaining = set(range(1, p.degree + 1))
    cycles = []
    while remaining:
        start = min(remaining)
        cyc = [start]
        remaining.discard(start)
        x = p(start)
        while x != start:
            cyc.append(x)
            remaining.discard(x)
            x = p(x)
        if len(cyc) > 1:
            cycles.append(cyc)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles)


def _check_degree(a: Permutation, b: Permutation) -> None:
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} != {b.degree}")


def _compose_images(a: Image, b: Image) -> Image:
    # (a o b)(i) = a(b(i))
    return tuple(a[x - 1] for x in b)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Composition a∘b: apply b first, then a."""
    _check_degree(a, b)
    return Permutation._trusted(_compose_images(a.image, b.image))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * a.degree
    for i, x in enumerate(a.image, 1):
        inv[x - 1] = i
    return Permutation._trusted(tuple(inv))


class PermGroup:
    """Permutation group given by generators, with on-demand enumeration.

    The element cache is filled at most once; concurrent fills agree because
    the closure is deterministic.  All queries afterwards are pure.
    """

    __slots__ = ("degree", "generators", "_images", "_elements", "_order")

    def __init__(self, degree: int, generators: Iterable[Permutation] = (),
                 *, _order: int | None = None) -> None:
        if degree < 1:
            raise ValueError("degree must be >= 1")
        generators = tuple(generators)
        for g in generators:
            if g.degree != degree:
                raise ValueError(
                    f"generator degree {g.degree} != group degree {degree}"
                )
        self.degree = degree
        self.generators = generators
        self._images: frozenset[Image] | None = None
        self._elements: tuple[Permutation, ...] | None = None
        self._order = _order

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[str]) -> "PermGroup":
        return cls(degree, [parse_cycles(text, degree) for text in cycles])

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Permutation]) -> "PermGroup":
        """Group whose generator list is an explicit, already-closed element set."""
        elems = tuple(sorted(set(elements)))
        g = cls(degree, elems)
        g._images = frozenset(p.image for p in elems)
        g._elements = elems
        g._order = len(elems)
        return g

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "generators": [cycle_notation(g) for g in self.generators],
        }

    @classmethod
    def from_json(cls, data) -> "PermGroup":
        return cls.from_cycles(int(data["degree"]), data["generators"])

    def __repr__(self) -> str:
        gens = ",".join(cycle_notation(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, <{gens}>)"


def _close_images(degree: int, gen_images: Sequence[Image], cap: int) -> frozenset[Image]:
    ident = tuple(range(1, degree + 1))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for b in frontier:
            for a in gen_images:
                c = _compose_images(a, b)
                if c not in seen:
                    if len(seen) >= cap:
                        raise CapacityError(
                            f"group closure exceeds cap of {cap} elements"
                        )
                    seen.add(c)
                    new.append(c)
        frontier = new
    return frozenset(seen)


def group_images(g: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> frozenset[Image]:
    """The element set of g as image tuples (enumerating if needed)."""
    if g._images is None:
        if cap < 1:
            raise ValueError("cap must be >= 1")
        images = _close_images(g.degree, [p.image for p in g.generators], cap)
        g._images = images
        g._order = len(images)
    return g._images


def enumerate_group(g: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> tuple[Permutation, ...]:
    """BFS closure of the generators; deterministic order (sorted by image)."""
    if g._elements is None:
        images = group_images(g, cap)
        g._elements = tuple(Permutation._trusted(img) for img in sorted(images))
    return g._elements


def group_order(g: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> int:
    if g._order is None:
        group_images(g, cap)
    return g._order


def contains(g: PermGroup, p: Permutation, cap: int = DEFAULT_GROUP_CAP) -> bool:
    return p.image in group_images(g, cap)


def intersection(a: PermGroup, b: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    """Subgroup whose element set is the set intersection of a and b."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} != {b.degree}")
    images = group_images(a, cap) & group_images(b, cap)
    return PermGroup.from_elements(a.degree, (Permutation._trusted(i) for i in images))


def generated_join(groups: Sequence[PermGroup]) -> PermGroup:
    """Group generated by the union of the given groups' generators."""
    if not groups:
        raise ValueError("need at least one group")
    degree = groups[0].degree
    gens: list[Permutation] = []
    seen: set[Image] = set()
    for g in groups:
        if g.degree != degree:
            raise ValueError(f"degree mismatch: {g.degree} != {degree}")
        for p in g.generators:
            if p.image not in seen:
                seen.add(p.image)
                gens.append(p)
    return PermGroup(degree, gens)


def orbit_partition(g: PermGroup) -> Partition:
    """Orbits of the natural action on {1..degree}; needs only the generators."""
    uf = _UnionFind(g.degree)
    for p in g.generators:
        for i, x in enumerate(p.image, 1):
            uf.union(i, x)
    groups: dict[int, list[int]] = {}
    for x in range(1, g.degree + 1):
        groups.setdefault(uf.find(x), []).append(x)
    return Partition(g.degree, groups.values())


def partition_stabilizer(p: Partition) -> PermGroup:
    """Group of all permutations mapping each block of p into itself.

    Generated by adjacent transpositions inside each block; the order
    (product of block-size factorials) is known without enumeration.
    """
    n = p.ground_size
    gens = []
    order = 1
    for block in p.blocks:
        order *= math.factorial(len(block))
        for a, b in zip(block, block[1:]):
            image = list(range(1, n + 1))
            image[a - 1], image[b - 1] = b, a
            gens.append(Permutation._trusted(tuple(image)))
    return PermGroup(n, gens, _order=order)


def symmetric_group(degree: int) -> PermGroup:
    """S_degree, generated by a transposition and the full cycle."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    gens = []
    if degree >= 2:
        gens.append(parse_cycles("(1 2)", degree))
    if degree >= 3:
        gens.append(Permutation._trusted(tuple(range(2, degree + 1)) + (1,)))
    return PermGroup(degree, gens, _order=math.factorial(degree))


def coset_partition(ambient_elements: Sequence[Permutation], h: PermGroup,
                    cap: int = DEFAULT_GROUP_CAP) -> Partition:
    """Partition of {1..|G|} into right cosets Hg of h inside the ambient list.

    Points are positions in the ambient's deterministic element order.  All
    blocks have size |H| (Lagrange).
    """
    index = {p.image: i for i, p in enumerate(ambient_elements, 1)}
    h_images = group_images(h, cap)
    if not h_images <= index.keys():
        raise ValueError("h is not a subgroup of the ambient group")
    assigned: set[int] = set()
    blocks = []
    for i, g in enumerate(ambient_elements, 1):
        if i in assigned:
            continue
        block = sorted(index[_compose_images(him, g.image)] for him in h_images)
        assigned.update(block)
        blocks.append(block)
    return Partition(len(ambient_elements), blocks)


def normalized_log_index(ambient_order: int, sub_order: int, degree: int) -> float:
    """(1/degree) * ln(ambient_order / sub_order).

    Normalization is by the degree of the permutation action, the group-side
    analogue of entropy per sample point.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if sub_order < 1 or ambient_order < 1:
        raise ValueError("orders must be positive")
    if ambient_order % sub_order != 0:
        raise ValueError(
            f"subgroup order {sub_order} does not divide ambient order {ambient_order}"
        )
    return math.log(ambient_order // sub_order) / degree


def all_subgroups(ambient: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> list[PermGroup]:
    """Every subgroup of a small enumerated group, in deterministic order.

    Starts from all cyclic subgroups and closes under pairwise generated
    joins; every subgroup is the join of its cyclic subgroups.  Meant for
    exhaustive checks on groups like S3 and S4.
    """
    elements = enumerate_group(ambient, cap)
    ident = identity(ambient.degree).image
    known: set[frozenset[Image]] = {frozenset([ident])}
    for p in elements:
        cyc = {ident}
        x = p.image
        while x not in cyc:
            cyc.add(x)
            x = _compose_images(p.image, x)
        known.add(frozenset(cyc))
    while True:
        new: set[frozenset[Image]] = set()
        for a in known:
            for b in known:
                if a is b or b <= a:
                    continue
                joined = frozenset(_close_images_from(a | b, cap))
                if joined not in known:
                    new.add(joined)
        if not new:
            break
        known |= new
    subs = sorted(known, key=lambda s: (len(s), sorted(s)))
    return [
        PermGroup.from_elements(ambient.degree, (Permutation._trusted(i) for i in s))
        for s in subs
    ]


def _close_images_from(images: Iterable[Image], cap: int) -> frozenset[Image]:
    images = list(images)
    degree = len(images[0])
    return _close_images(degree, images, cap)

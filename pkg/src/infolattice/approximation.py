"""Dilation of rational probability spaces to uniform ones and the
log-index approximation of entropy vectors.

For a partition of a uniform n-point space with block sizes b_1..b_J, the
stabilizer subgroup of S_n has order prod b_j!, so its normalized log-index
is (1/n) * ln(n! / prod b_j!).  That value is computed symbolically from the
block sizes via exact cumulative log-factorial sums; the symmetric group is
never materialized.

The o(n) Stirling remainder is replaced by the explicit two-sided bound
1 <= ln m! - (m ln m - m) <= ln m + 1 for m >= 1, which yields the
computable error certificate (J+1) * (ln n + 1) / n per vector entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CapacityError
from .lattice import (
    DEFAULT_VECTOR_CAP,
    SemilatticeVectors,
    derived_partitions,
    semilattice_slots,
    semilattice_vectors,
    slot_label,
)
from .partitions import InfoElement, Partition, ProbabilitySpace

# ln k cumulative sums; _LNFACT[m] = ln m!
_LNFACT = [0.0, 0.0]


def ln_factorial(m: int) -> float:
    """ln(m!) as an exact cumulative sum of ln k, cached."""
    if m < 0:
        raise ValueError("m must be >= 0")
    while len(_LNFACT) <= m:
        _LNFACT.append(_LNFACT[-1] + math.log(len(_LNFACT)))
    return _LNFACT[m]


@dataclass(frozen=True)
class DilationPlan:
    """How a rational space is expanded to a uniform one.

    lcm_M is the lcm of the probability denominators; point i is split into
    amplification_K * multiplicities[i] uniform points.
    """

    lcm_M: int
    multiplicities: tuple[int, ...]
    base_size: int
    amplification_K: int
    dilated_size: int


def dilate(space: ProbabilitySpace, partitions: Sequence[Partition],
           K: int) -> tuple[DilationPlan, list[Partition]]:
    """Expand each sample point into K*M*p_i uniform points and dilate the
    given partitions accordingly (blocks become unions of expansions)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    for p in partitions:
        if p.ground_size != space.size:
            raise ValueError(
                f"partition ground size {p.ground_size} != space size {space.size}"
            )
    M = math.lcm(*(pr.denominator for pr in space.probs))
    mults = tuple(int(M * pr) for pr in space.probs)
    base_size = sum(mults)
    dilated_size = base_size * K
    plan = DilationPlan(M, mults, base_size, K, dilated_size)

    offsets = [0]
    for m in mults:
        offsets.append(offsets[-1] + K * m)

    dilated = []
    for p in partitions:
        blocks = []
        for block in p.blocks:
            expanded: list[int] = []
            for x in block:
                expanded.extend(range(offsets[x - 1] + 1, offsets[x] + 1))
            blocks.append(expanded)
        dilated.append(Partition(dilated_size, blocks))
    return plan, dilated


def log_index_of_partition(p: Partition) -> float:
    """Normalized log-index of the stabilizer of a uniform-space partition:
    (1/n) * (ln n! - sum_j ln b_j!)."""
    n = p.ground_size
    total = ln_factorial(n)
    for block in p.blocks:
        total -= ln_factorial(len(block))
    value = total / n
    return 0.0 if value == 0.0 else value


def stirling_error_bound(p: Partition) -> float:
    """Rigorous upper bound on |entropy - log_index| for a J-block partition
    of n uniform points: (J+1) * (ln n + 1) / n."""
    n = p.ground_size
    return (len(p.blocks) + 1) * (math.log(n) + 1.0) / n


@dataclass(frozen=True)
class ApproximationReport:
    """Entropy vector vs log-index vector of the dilated instance."""

    plan: DilationPlan
    entropy_vector: SemilatticeVectors
    logindex_vector: SemilatticeVectors
    errors: tuple[float, ...]
    per_entry_bounds: tuple[float, ...]
    max_norm: float
    l1_norm: float
    stirling_bound: float

    def rows(self) -> list[tuple[str, float, float, float, float]]:
        """(slot label, entropy, log-index, |error|, bound) per vector entry."""
        return [
            (slot_label(s), h, l, e, b)
            for s, h, l, e, b in zip(
                self.entropy_vector.slots,
                self.entropy_vector.values,
                self.logindex_vector.values,
                self.errors,
                self.per_entry_bounds,
            )
        ]

    def to_json(self) -> dict:
        return {
            "dilation": {
                "lcm": self.plan.lcm_M,
                "multiplicities": list(self.plan.multiplicities),
                "base_size": self.plan.base_size,
                "K": self.plan.amplification_K,
                "dilated_size": self.plan.dilated_size,
            },
            "entries": [
                {
                    "slot": label,
                    "entropy": h,
                    "log_index": l,
                    "abs_error": e,
                    "stirling_bound": b,
                }
                for label, h, l, e, b in self.rows()
            ],
            "max_norm": self.max_norm,
            "l1_norm": self.l1_norm,
            "stirling_bound": self.stirling_bound,
        }


def approximate(elements: Sequence[InfoElement], K: int,
                vector_cap: int = DEFAULT_VECTOR_CAP) -> ApproximationReport:
    """Dilate by K, then compare the entropy vector (original space) with the
    log-index vector of the derived partitions on the dilated uniform space."""
    if not elements:
        raise ValueError("need at least one element")
    space = elements[0].space
    for e in elements:
        if e.space != space:
            raise ValueError("all elements must share one probability space")

    h_vec = semilattice_vectors(elements, vector_cap)
    plan, dilated = dilate(space, [e.partition for e in elements], K)
    slots = semilattice_slots(len(elements))
    derived = derived_partitions(dilated, slots)
    l_values = tuple(log_index_of_partition(p) for p in derived)
    l_vec = SemilatticeVectors(len(elements), slots, l_values)

    errors = tuple(abs(h - l) for h, l in zip(h_vec.values, l_vec.values))
    bounds = tuple(stirling_error_bound(p) for p in derived)
    return ApproximationReport(
        plan=plan,
        entropy_vector=h_vec,
        logindex_vector=l_vec,
        errors=errors,
        per_entry_bounds=bounds,
        max_norm=max(errors),
        l1_norm=sum(errors),
        stirling_bound=max(bounds),
    )


@dataclass(frozen=True)
class ScanRow:
    K: int
    dilated_size: int
    max_error: float
    l1_error: float
    bound: float


def convergence_scan(elements: Sequence[InfoElement], K_list: Sequence[int],
                     vector_cap: int = DEFAULT_VECTOR_CAP) -> list[ScanRow]:
    """One approximation report row per K; K_list must be ascending."""
    if not K_list:
        raise ValueError("K_list must not be empty")
    if list(K_list) != sorted(K_list):
        raise ValueError("K_list must be ascending")
    rows = []
    for K in K_list:
        rep = approximate(elements, K, vector_cap)
        rows.append(
            ScanRow(K, rep.plan.dilated_size, rep.max_norm, rep.l1_norm,
                    rep.stirling_bound)
        )
    return rows


def scan_to_csv(rows: Sequence[ScanRow]) -> str:
    lines = ["K,dilated_size,max_error,l1_error,stirling_bound"]
    for r in rows:
        lines.append(
            f"{r.K},{r.dilated_size},{r.max_error!r},{r.l1_error!r},{r.bound!r}"
        )
    return "\n".join(lines) + "\n"

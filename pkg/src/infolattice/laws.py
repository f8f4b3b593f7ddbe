"""Linear information laws over lattice terms, evaluated on both sides of
the information-lattice / subgroup-lattice correspondence.

A law is a linear combination of H(term) values compared against zero after
moving everything to the left-hand side.  On the partition side a term's
``v`` is the common refinement and ``^`` the finest common coarsening; on the
subgroup side the dual convention applies (``v`` -> intersection, ``^`` ->
generated join) and each H slot becomes a normalized log-index.

Tolerances: equality uses 1e-9; inequalities tolerate float noise of 1e-12.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import perm_groups
from .lattice import Join, LatticeTerm, Literal, Meet, evaluate_term, term_text
from .partitions import (
    InfoElement,
    Partition,
    ProbabilitySpace,
    common_refinement,
    entropy,
    finest_common_coarsening,
    parse_partition,
    rv_to_partition,
)
from .perm_groups import PermGroup, cycle_notation

EQUALITY_TOL = 1e-9
INEQUALITY_SLACK = 1e-12


@dataclass(frozen=True)
class LawExpression:
    """Sum of coefficient * H(lattice term) plus a rational constant,
    compared against 0."""

    n_vars: int
    terms: tuple[tuple[Fraction, LatticeTerm], ...]
    relation: str  # ">=", "<=", or "="
    constant: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.relation not in (">=", "<=", "="):
            raise ValueError(f"bad relation {self.relation!r}")
        if not self.terms:
            raise ValueError("law needs at least one H(...) term")
        for _, term in self.terms:
            if _max_literal(term) > self.n_vars:
                raise ValueError("literal index exceeds n_vars")


def _max_literal(term: LatticeTerm) -> int:
    if isinstance(term, Literal):
        return term.index
    return max(_max_literal(term.left), _max_literal(term.right))


def law_text(law: LawExpression) -> str:
    """Canonical rendering, always in the form '<lhs> <rel> 0'."""
    pieces = []
    for coeff, term in law.terms:
        mag = abs(coeff)
        body = f"H({term_text(term)})" if mag == 1 else f"{mag}*H({term_text(term)})"
        pieces.append(("- " if coeff < 0 else "+ ") + body)
    if law.constant:
        pieces.append(("- " if law.constant < 0 else "+ ") + str(abs(law.constant)))
    text = " ".join(pieces)
    if text.startswith("+ "):
        text = text[2:]
    rel = law.relation if law.relation != "=" else "="
    return f"{text} {rel} 0"


# ---------------------------------------------------------------------------
# Parser

class LawSyntaxError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|(>=|<=|==|[()*/+\-=^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise LawSyntaxError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            sym = "=" if m.group(3) == "==" else m.group(3)
            tokens.append(("sym", sym, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, pos = self.take()
        if val != value:
            raise LawSyntaxError(f"expected {value!r}, got {val or 'end of input'!r}", pos)

    def fail(self, message: str) -> None:
        raise LawSyntaxError(message, self.peek()[2])

    # expr := ['+'|'-'] term (('+'|'-') term)*
    # term := rational ['*'] H-term | rational | H-term
    def parse_expr(self) -> tuple[list[tuple[Fraction, LatticeTerm]], Fraction]:
        terms: list[tuple[Fraction, LatticeTerm]] = []
        constant = Fraction(0)
        sign = Fraction(1)
        first = True
        while True:
            kind, val, pos = self.peek()
            if val in ("+", "-"):
                self.take()
                sign = Fraction(1) if val == "+" else Fraction(-1)
            elif not first:
                break
            coeff, term = self.parse_term()
            if term is None:
                constant += sign * coeff
            else:
                terms.append((sign * coeff, term))
            sign = Fraction(1)
            first = False
            kind, val, pos = self.peek()
            if val not in ("+", "-"):
                break
        return terms, constant

    def parse_term(self) -> tuple[Fraction, LatticeTerm | None]:
        kind, val, pos = self.peek()
        if kind == "int":
            coeff = self.parse_rational()
            kind, val, pos = self.peek()
            if val == "*":
                self.take()
                return coeff, self.parse_h()
            if kind == "name" and val == "H":
                return coeff, self.parse_h()
            return coeff, None
        if kind == "name" and val == "H":
            return Fraction(1), self.parse_h()
        self.fail(f"expected a term, got {val or 'end of input'!r}")

    def parse_rational(self) -> Fraction:
        kind, val, pos = self.take()
        if kind != "int":
            raise LawSyntaxError("expected a number", pos)
        num = int(val)
        if self.peek()[1] == "/":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise LawSyntaxError("expected a denominator", pos)
            return Fraction(num, int(val))
        return Fraction(num)

    def parse_h(self) -> LatticeTerm:
        kind, val, pos = self.take()
        if not (kind == "name" and val == "H"):
            raise LawSyntaxError("expected 'H'", pos)
        self.expect("(")
        term = self.parse_lterm()
        self.expect(")")
        return term

    # lterm := mterm ('v' mterm)* ; mterm := atom ('^' atom)* ; '^' binds tighter
    def parse_lterm(self) -> LatticeTerm:
        term = self.parse_mterm()
        while self.peek()[1] == "v":
            self.take()
            term = Join(term, self.parse_mterm())
        return term

    def parse_mterm(self) -> LatticeTerm:
        term = self.parse_atom()
        while self.peek()[1] == "^":
            self.take()
            term = Meet(term, self.parse_atom())
        return term

    def parse_atom(self) -> LatticeTerm:
        kind, val, pos = self.take()
        if kind == "int":
            index = int(val)
            if index < 1:
                raise LawSyntaxError("variable indices are 1-based", pos)
            return Literal(index)
        if val == "(":
            term = self.parse_lterm()
            self.expect(")")
            return term
        raise LawSyntaxError(f"expected a variable index, got {val or 'end of input'!r}", pos)


def parse_law(text: str) -> LawExpression:
    """Parse 'expr rel expr' into a normalized LawExpression (rhs subtracted)."""
    parser = _Parser(text)
    lhs_terms, lhs_const = parser.parse_expr()
    kind, rel, pos = parser.take()
    if rel not in (">=", "<=", "="):
        raise LawSyntaxError(f"expected a relation, got {rel or 'end of input'!r}", pos)
    rhs_terms, rhs_const = parser.parse_expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise LawSyntaxError(f"trailing input {val!r}", pos)

    terms: dict[LatticeTerm, Fraction] = {}
    for coeff, term in lhs_terms:
        terms[term] = terms.get(term, Fraction(0)) + coeff
    for coeff, term in rhs_terms:
        terms[term] = terms.get(term, Fraction(0)) - coeff
    kept = tuple((c, t) for t, c in terms.items() if c != 0)
    if not kept:
        raise LawSyntaxError("law has no H(...) terms after normalization", 0)
    n_vars = max(_max_literal(t) for _, t in kept)
    return LawExpression(n_vars, kept, rel, lhs_const - rhs_const)


BUILTIN_LAWS = {
    "nonneg": "H(1) >= 0",
    "joint-monotone": "H(1v2) >= H(1)",
    "joint-submodular": "H(1v2) + H(2v3) >= H(1v2v3) + H(2)",
    "zhang-yeung": (
        "3*H(1v3) + 3*H(1v4) + H(2v3) + H(2v4) + 3*H(3v4) >= "
        "H(1) + 2*H(3) + 2*H(4) + H(1v2) + 4*H(1v3v4) + H(2v3v4)"
    ),
    "gk-bound": "H(1^2) <= H(1) + H(2) - H(1v2)",
    "common-monotone": "H(1) >= H(1^2)",
    "common-submodular": "H(1^2) + H(2^3) >= H(1^2^3) + H(2)",
    "common-supermodular": "H(1^2) + H(2^3) <= H(1^2^3) + H(2)",
}


def builtin_law(name: str) -> LawExpression:
    if name not in BUILTIN_LAWS:
        raise ValueError(
            f"unknown law {name!r}; available: {', '.join(sorted(BUILTIN_LAWS))}"
        )
    return parse_law(BUILTIN_LAWS[name])


# ---------------------------------------------------------------------------
# Evaluation

@dataclass(frozen=True)
class EvalResult:
    lhs_value: float
    satisfied: bool
    witness_values: tuple[float, ...]  # H or L value per law term, in order
    relation: str


def _satisfied(lhs: float, relation: str) -> bool:
    if relation == ">=":
        return lhs >= -INEQUALITY_SLACK
    if relation == "<=":
        return lhs <= INEQUALITY_SLACK
    return abs(lhs) <= EQUALITY_TOL


def violation_margin(result: EvalResult) -> float | None:
    """Positive amount by which the relation fails, or None if satisfied."""
    if result.satisfied:
        return None
    if result.relation == ">=":
        return -result.lhs_value
    return abs(result.lhs_value)


def _finish(law: LawExpression, term_values: list[float]) -> EvalResult:
    lhs = float(law.constant)
    for (coeff, _), value in zip(law.terms, term_values):
        lhs += float(coeff) * value
    return EvalResult(lhs, _satisfied(lhs, law.relation), tuple(term_values), law.relation)


def eval_on_partitions(law: LawExpression, elements: Sequence[InfoElement]) -> EvalResult:
    """Evaluate with information semantics: v = common refinement,
    ^ = finest common coarsening; entropies in natural log."""
    if len(elements) != law.n_vars:
        raise ValueError(f"law needs {law.n_vars} elements, got {len(elements)}")
    space = elements[0].space
    parts = [e.partition for e in elements]
    cache: dict[LatticeTerm, float] = {}
    values = []
    for _, term in law.terms:
        if term not in cache:
            evaluated = evaluate_term(term, parts, common_refinement,
                                      finest_common_coarsening)
            cache[term] = entropy(InfoElement(evaluated, space))
        values.append(cache[term])
    return _finish(law, values)


def eval_on_subgroups(law: LawExpression, groups: Sequence[PermGroup],
                      ambient_order: int, degree: int,
                      cap: int = perm_groups.DEFAULT_GROUP_CAP) -> EvalResult:
    """Evaluate with the dual convention: v = intersection, ^ = generated
    join; each H slot becomes (1/degree) * ln(ambient_order / |subgroup|)."""
    if len(groups) != law.n_vars:
        raise ValueError(f"law needs {law.n_vars} groups, got {len(groups)}")
    for g in groups:
        if g.degree != degree:
            raise ValueError(f"group degree {g.degree} != {degree}")
    cache: dict[LatticeTerm, float] = {}
    values = []
    for _, term in law.terms:
        if term not in cache:
            sub = evaluate_term(
                term, groups,
                lambda a, b: perm_groups.intersection(a, b, cap),
                lambda a, b: perm_groups.generated_join([a, b]),
            )
            cache[term] = perm_groups.normalized_log_index(
                ambient_order, perm_groups.group_order(sub, cap), degree
            )
        values.append(cache[term])
    return _finish(law, values)


# ---------------------------------------------------------------------------
# Falsification

@dataclass(frozen=True)
class Counterexample:
    side: str  # "partitions" or "subgroups"
    instance: dict
    margin: float
    seed: int
    law: str

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "instance": self.instance,
            "margin": self.margin,
            "seed": self.seed,
            "law": self.law,
        }

    @classmethod
    def from_json(cls, data) -> "Counterexample":
        return cls(data["side"], data["instance"], float(data["margin"]),
                   int(data["seed"]), data["law"])


def _random_partition_instance(rng: random.Random, n_vars: int,
                               ground_range: tuple[int, int]) -> list[InfoElement]:
    ground = rng.randint(*ground_range)
    space = ProbabilitySpace.uniform(ground)
    return [
        InfoElement(rv_to_partition([rng.randint(1, ground) for _ in range(ground)]), space)
        for _ in range(n_vars)
    ]


def _random_permutation(rng: random.Random, degree: int) -> perm_groups.Permutation:
    image = list(range(1, degree + 1))
    rng.shuffle(image)
    return perm_groups.Permutation(image)


def _random_subgroup_instance(rng: random.Random, n_vars: int,
                              degree_range: tuple[int, int]) -> tuple[list[PermGroup], int, int]:
    degree = rng.randint(*degree_range)
    groups = [
        PermGroup(degree, [_random_permutation(rng, degree)
                           for _ in range(rng.randint(1, 3))])
        for _ in range(n_vars)
    ]
    return groups, math.factorial(degree), degree


def _serialize_partition_instance(elements: Sequence[InfoElement]) -> dict:
    return {
        "space": elements[0].space.to_json(),
        "elements": {str(i): str(e.partition) for i, e in enumerate(elements, 1)},
    }


def _serialize_subgroup_instance(groups: Sequence[PermGroup], ambient_order: int,
                                 degree: int) -> dict:
    return {
        "degree": degree,
        "ambient_order": ambient_order,
        "groups": {
            str(i): [cycle_notation(p) for p in g.generators]
            for i, g in enumerate(groups, 1)
        },
    }


def falsify(law: LawExpression, side: str, budget: int, seed: int,
            ground_range: tuple[int, int] = (3, 8),
            degree_range: tuple[int, int] = (3, 6)) -> Counterexample | None:
    """Seeded random search for a violating instance; first hit wins.

    Partition side draws random partitions of uniform ground sets; subgroup
    side draws groups generated by 1-3 random permutations in S3..S6 by
    default.  Deterministic given the seed.
    """
    if side not in ("partitions", "subgroups"):
        raise ValueError(f"side must be 'partitions' or 'subgroups', got {side!r}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = random.Random(seed)
    for _ in range(budget):
        if side == "partitions":
            elements = _random_partition_instance(rng, law.n_vars, ground_range)
            result = eval_on_partitions(law, elements)
            instance = _serialize_partition_instance(elements)
        else:
            groups, ambient_order, degree = _random_subgroup_instance(
                rng, law.n_vars, degree_range
            )
            result = eval_on_subgroups(law, groups, ambient_order, degree)
            instance = _serialize_subgroup_instance(groups, ambient_order, degree)
        margin = violation_margin(result)
        if margin is not None:
            return Counterexample(side, instance, margin, seed, law_text(law))
    return None


def replay(counterexample: Counterexample) -> EvalResult:
    """Re-evaluate a counterexample's instance against its law."""
    law = parse_law(counterexample.law)
    if counterexample.side == "partitions":
        space = ProbabilitySpace.from_json(counterexample.instance["space"])
        elements = [
            InfoElement(parse_partition(
                counterexample.instance["elements"][str(i)], space.size), space)
            for i in range(1, law.n_vars + 1)
        ]
        return eval_on_partitions(law, elements)
    degree = int(counterexample.instance["degree"])
    ambient_order = int(counterexample.instance["ambient_order"])
    groups = [
        PermGroup.from_cycles(degree, counterexample.instance["groups"][str(i)])
        for i in range(1, law.n_vars + 1)
    ]
    return eval_on_subgroups(law, groups, ambient_order, degree)


# ---------------------------------------------------------------------------
# The order-5 symmetric group counterexample to common-information
# supermodularity (three subgroups whose pairwise joins are dihedral of
# order 10 while the triple join is the alternating group of order 60).

@dataclass(frozen=True)
class S5Report:
    orders: tuple[int, int, int, int, int, int]  # |G1|,|G2|,|G3|,|G12|,|G23|,|G123|
    lhs_product: int  # |G1 v G2| * |G2 v G3|
    rhs_product: int  # |G1 v G2 v G3| * |G2|
    subgroup_margin: float
    partition_margin: float

    @property
    def violated(self) -> bool:
        return self.lhs_product < self.rhs_product


def verify_s5_counterexample() -> S5Report:
    """Build the three subgroups of S5, check the order pattern
    (5,2,5,10,10,60) and 100 < 120, and evaluate common-supermodularity on
    the subgroup side and on the 120-point coset-partition side."""
    degree = 5
    g1 = PermGroup.from_cycles(degree, ["(1 2 3 4 5)"])
    g2 = PermGroup.from_cycles(degree, ["(1 2)(4 5)"])
    g3 = PermGroup.from_cycles(degree, ["(1 2 5 4 3)"])
    law = builtin_law("common-supermodular")

    j12 = perm_groups.generated_join([g1, g2])
    j23 = perm_groups.generated_join([g2, g3])
    j123 = perm_groups.generated_join([g1, g2, g3])
    orders = tuple(perm_groups.group_order(g) for g in (g1, g2, g3, j12, j23, j123))
    if orders != (5, 2, 5, 10, 10, 60):
        raise AssertionError(f"unexpected order pattern {orders}")

    ambient = perm_groups.symmetric_group(degree)
    ambient_elements = perm_groups.enumerate_group(ambient)
    sub_result = eval_on_subgroups(law, [g1, g2, g3], len(ambient_elements), degree)
    sub_margin = violation_margin(sub_result)

    space = ProbabilitySpace.uniform(len(ambient_elements))
    elements = [
        InfoElement(perm_groups.coset_partition(ambient_elements, g), space)
        for g in (g1, g2, g3)
    ]
    part_result = eval_on_partitions(law, elements)
    part_margin = violation_margin(part_result)
    if sub_margin is None or part_margin is None:
        raise AssertionError("supermodularity unexpectedly satisfied")

    return S5Report(
        orders=orders,
        lhs_product=orders[3] * orders[4],
        rhs_product=orders[5] * orders[1],
        subgroup_margin=sub_margin,
        partition_margin=part_margin,
    )

"""Three zero skip-cost code constructions from covering designs, plus the
closed-form block-count and asymptotic expansion-factor calculators.

All three constructions order columns and column entries canonically so that
outputs are byte-identical across runs:

* duplication: every block written twice, copies adjacent, entries ascending;
* combination: base blocks first (input order, ascending entries), then the
  prefixed copies of the strength-(t-1) design, grouped by source block with
  prefixes in lexicographic order, the (t-1)-prefix family before the
  r-prefix family;
* recursive blow-up: the block families emitted in order, each family sorted
  lexicographically, entries ascending.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations

from .designs import (
    CoveringDesign,
    DesignParams,
    _ceil_div,
    is_properly_local,
    multiply_design,
    verify_covering,
)
from .skipcost import CfrArray

__all__ = [
    "Case",
    "ConstructionError",
    "RecursiveParams",
    "SizePrediction",
    "RecursiveFamilies",
    "mod_bar",
    "construct_duplicate",
    "construct_combination",
    "recursive_block_families",
    "construct_recursive",
    "predict_recursive_size",
    "asymptotic_expansion",
]


class ConstructionError(ValueError):
    """A construction precondition failed, or generated output contradicts
    its closed-form size (internal-consistency error)."""


class Case(Enum):
    """Which branch of the recursive size formula applies, by the residue r."""

    R_EQ_TM1 = "r = t-1"
    MID = "floor(t/q) <= r <= t-2"
    LOW = "1 <= r <= floor(t/q)-1"


def mod_bar(a: int, b: int) -> int:
    """Residue of a modulo b, represented in [1, b] instead of [0, b-1]."""
    if a < 1 or b < 1:
        raise ValueError("mod_bar needs positive arguments")
    return (a - 1) % b + 1


@dataclass(frozen=True)
class RecursiveParams:
    """q = ceil(k/(t-1)) parts, residue r = k mod-bar (t-1), and case tag.
    Always k = (q-1)(t-1) + r with 1 <= r <= t-1."""

    q: int
    r: int
    case: Case

    @classmethod
    def from_params(cls, t: int, k: int) -> "RecursiveParams":
        if t < 2:
            raise ValueError("recursive parameters need t >= 2")
        if k < t:
            raise ValueError("need k >= t")
        q = _ceil_div(k, t - 1)
        r = mod_bar(k, t - 1)
        if r == t - 1:
            case = Case.R_EQ_TM1
        elif r >= t // q:
            case = Case.MID
        else:
            case = Case.LOW
        assert k == (q - 1) * (t - 1) + r
        return cls(q=q, r=r, case=case)


@dataclass(frozen=True)
class SizePrediction:
    """Closed-form block count of the recursive construction: the per-block
    coefficient c, the design-independent remainder, and the case tag."""

    predicted_blocks: int
    coefficient: int
    case: Case


def _require_verified(design: CoveringDesign, label: str = "design") -> None:
    uncovered = verify_covering(design)
    if uncovered:
        raise ConstructionError(
            f"{label} is not a covering design: {len(uncovered)} uncovered "
            f"{design.params.t}-subsets, first {uncovered[0]}"
        )


def construct_duplicate(design: CoveringDesign) -> CfrArray:
    """Write every block twice; a twin column repairs any erasure wholesale,
    so the result has locality 1 and skip cost 0."""
    _require_verified(design)
    return CfrArray.from_design(multiply_design(design, 2))


def construct_combination(
    design_t: CoveringDesign, design_tm1: CoveringDesign
) -> CfrArray:
    """Append prefixed copies of a strength-(t-1) design to the blocks of a
    strength-t design over the same (k, v).

    Each block of the weaker design is written once per subset of the prefix
    size, with that subset occupying the first rows; prefix sizes are t-1,
    plus r = k mod-bar (t-1) when 2 <= r <= t-2.  An erased base column is
    then repaired from prefix rows at zero cost, and copies repair each other.

    An empty strength-(t-1) design is accepted as a degenerate input: no
    copies are appended and the result is the plain block array.
    """
    pt, pw = design_t.params, design_tm1.params
    if pt.t < 2:
        raise ValueError("combination needs strength t >= 2")
    if (pt.k, pt.v) != (pw.k, pw.v):
        raise ConstructionError(
            f"designs must share (k, v); got ({pt.k}, {pt.v}) and ({pw.k}, {pw.v})"
        )
    if pw.t != pt.t - 1:
        raise ConstructionError(
            f"second design must have strength {pt.t - 1}, got {pw.t}"
        )
    _require_verified(design_t, "strength-t design")
    if design_tm1.blocks:
        _require_verified(design_tm1, "strength-(t-1) design")

    t, k = pt.t, pt.k
    r = mod_bar(k, t - 1)
    columns: list[tuple[int, ...]] = list(design_t.blocks)
    prefix_sizes = [t - 1] if r in (1, t - 1) else [t - 1, r]
    for size in prefix_sizes:
        for block in design_tm1.blocks:
            for prefix in combinations(block, size):
                chosen = set(prefix)
                columns.append(prefix + tuple(x for x in block if x not in chosen))

    copies = sum(math.comb(k, size) for size in prefix_sizes)
    assert len(columns) == len(design_t.blocks) + copies * len(design_tm1.blocks)
    return CfrArray.from_columns(columns, pt.v)


def _translate(points, shift: int, v: int) -> frozenset[int]:
    return frozenset(x + (shift - 1) * v for x in points)


@dataclass(frozen=True)
class RecursiveFamilies:
    """The four block families of the recursive blow-up, kept separate; the
    third family is split by its two index-profile types."""

    b1: frozenset[tuple[int, ...]]
    b2: frozenset[tuple[int, ...]]
    b3_one_short: frozenset[tuple[int, ...]]  # profile {r, t-1, ..., t-1}
    b3_one_absent: frozenset[tuple[int, ...]]  # profile {0, t-1+r, t-1, ...}
    b4: frozenset[tuple[int, ...]]

    def ordered_blocks(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        out.extend(sorted(self.b1))
        out.extend(sorted(self.b2))
        out.extend(sorted(self.b3_one_short | self.b3_one_absent))
        out.extend(sorted(self.b4))
        return out

    def total(self) -> int:
        return (
            len(self.b1)
            + len(self.b2)
            + len(self.b3_one_short)
            + len(self.b3_one_absent)
            + len(self.b4)
        )


def _count_assignments(elements: tuple[int, ...], counts: list[int]):
    """All ways to split `elements` into ordered groups of the given sizes."""
    if not counts:
        yield []
        return
    head = counts[0]
    for group in combinations(elements, head):
        taken = set(group)
        rest = tuple(x for x in elements if x not in taken)
        for tail in _count_assignments(rest, counts[1:]):
            yield [group] + tail


def recursive_block_families(design: CoveringDesign) -> RecursiveFamilies:
    """Generate the block families of the recursive blow-up of a covering
    design onto the point set [1, q*v] (point x in copy i maps to x+(i-1)v).

    Families one and two replicate a (t-1)-subset across the copies with a
    short remainder; families three and four re-index each base block across
    copies by every index vector whose copy-multiplicity profile matches.
    Generation iterates (block, profile assignment) pairs rather than raw
    index vectors, which is equivalent and bounded by the output size.
    """
    t, k, v = design.params.t, design.params.k, design.params.v
    rp = RecursiveParams.from_params(t, k)
    q, r = rp.q, rp.r
    copies = range(1, q + 1)

    b1: set[tuple[int, ...]] = set()
    for u_set in combinations(range(1, v + 1), t - 1):
        for v_set in combinations(u_set, r):
            for a in copies:
                block: frozenset[int] = _translate(v_set, a, v)
                for i in copies:
                    if i != a:
                        block |= _translate(u_set, i, v)
                b1.add(tuple(sorted(block)))

    b2: set[tuple[int, ...]] = set()
    if rp.case is Case.LOW:
        for u_set in combinations(range(1, v + 1), t - 1):
            for m in range(r + 1, t // q + 1):
                for v_set in combinations(u_set, m):
                    for w_set in combinations(u_set, t - 1 + r - m):
                        for a, b in permutations(copies, 2):
                            block = _translate(v_set, a, v) | _translate(w_set, b, v)
                            for i in copies:
                                if i != a and i != b:
                                    block |= _translate(u_set, i, v)
                            b2.add(tuple(sorted(block)))

    profiles_short: list[list[int]] = []
    if r == t - 1:
        profiles_short.append([t - 1] * q)
    else:
        for a in range(q):
            vec = [t - 1] * q
            vec[a] = r
            profiles_short.append(vec)

    profiles_absent: list[list[int]] = []
    for a, b in permutations(range(q), 2):
        vec = [t - 1] * q
        vec[a] = 0
        vec[b] = t - 1 + r
        profiles_absent.append(vec)

    profiles_b4: list[list[int]] = []
    if rp.case is Case.LOW:
        for m in range(r + 1, t // q + 1):
            for a, b in permutations(range(q), 2):
                vec = [t - 1] * q
                vec[a] = m
                vec[b] = t - 1 + r - m
                profiles_b4.append(vec)

    def blow_up(profiles: list[list[int]]) -> frozenset[tuple[int, ...]]:
        out: set[tuple[int, ...]] = set()
        for base in design.blocks:
            for vec in profiles:
                for groups in _count_assignments(base, vec):
                    block = frozenset()
                    for i, group in enumerate(groups, start=1):
                        block |= _translate(group, i, v)
                    out.add(tuple(sorted(block)))
        return frozenset(out)

    families = RecursiveFamilies(
        b1=frozenset(b1),
        b2=frozenset(b2),
        b3_one_short=blow_up(profiles_short),
        b3_one_absent=blow_up(profiles_absent),
        b4=blow_up(profiles_b4),
    )
    groups = [
        families.b1,
        families.b2,
        families.b3_one_short,
        families.b3_one_absent,
        families.b4,
    ]
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            overlap = groups[i] & groups[j]
            if overlap:
                raise ConstructionError(
                    f"internal error: block families {i} and {j} overlap, e.g. "
                    f"{sorted(overlap)[0]}"
                )
    return families


def construct_recursive(design: CoveringDesign) -> tuple[CfrArray, SizePrediction]:
    """Blow a (t,k,v) covering design up to a (t,k,q*v) one whose columns,
    written in ascending order, admit zero skip-cost repair at locality q
    whenever every (t-1)-subset of the base design lies in at least q blocks.

    When that locality condition fails the construction still produces a
    valid covering design of the predicted size (a warning is emitted; the
    zero-skip guarantee is what the condition protects).  Duplicate base
    blocks are rejected because the closed-form size assumes distinct blocks.
    The generated, deduplicated block count is checked against
    :func:`predict_recursive_size`; a mismatch raises.
    """
    params = design.params
    t, k, v = params.t, params.k, params.v
    if t < 2:
        raise ValueError("recursive construction needs t >= 2")
    if design.has_duplicate_blocks():
        raise ConstructionError(
            "recursive construction requires distinct base blocks "
            "(the closed-form size is undefined for multisets)"
        )
    _require_verified(design)

    rp = RecursiveParams.from_params(t, k)
    floor_rep = _ceil_div(v - t + 1, k - t + 1)
    if floor_rep < rp.q:
        warnings.warn(
            f"base design guarantees only {floor_rep} blocks per (t-1)-subset, "
            f"fewer than locality {rp.q}: zero skip cost is not guaranteed",
            stacklevel=2,
        )
    elif not is_properly_local(params).ok:
        warnings.warn(
            f"base design is not properly local (floor {floor_rep} < "
            f"{is_properly_local(params).threshold}); locality {rp.q} still "
            "holds but with no slack",
            stacklevel=2,
        )

    families = recursive_block_families(design)
    prediction = predict_recursive_size(params, design.num_blocks)
    blocks = families.ordered_blocks()
    if len(blocks) != prediction.predicted_blocks:
        raise ConstructionError(
            f"internal error: generated {len(blocks)} blocks but the closed "
            f"form predicts {prediction.predicted_blocks}"
        )
    array = CfrArray.from_columns(blocks, rp.q * v)
    return array, prediction


def _exact_div(num: int, den: int) -> int:
    quotient, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"internal error: {num} not divisible by {den}")
    return quotient


def _coefficient(t: int, k: int, rp: RecursiveParams) -> int:
    q, r = rp.q, rp.r
    fact = math.factorial
    if rp.case is Case.R_EQ_TM1:
        return _exact_div(fact(k), fact(t - 1) ** q) + q * (q - 1) * _exact_div(
            fact(k), fact(2 * t - 2) * fact(t - 1) ** (q - 2)
        )
    c2 = q * _exact_div(fact(k), fact(r) * fact(t - 1) ** (q - 1)) + q * (q - 1) * _exact_div(
        fact(k), fact(t - 1 + r) * fact(t - 1) ** (q - 2)
    )
    if rp.case is Case.MID:
        return c2
    extra = sum(
        _exact_div(fact(k), fact(m) * fact(t - 1 + r - m) * fact(t - 1) ** (q - 2))
        for m in range(r + 1, t // q + 1)
    )
    return c2 + q * (q - 1) * extra


def predict_recursive_size(params: DesignParams, base_blocks: int) -> SizePrediction:
    """Closed-form block count of the recursive blow-up: a coefficient times
    the base block count plus a design-independent remainder, split into
    three cases by the residue r."""
    t, k, v = params.t, params.k, params.v
    if t < 2:
        raise ValueError("size prediction needs t >= 2")
    if base_blocks < 0:
        raise ValueError("base block count must be >= 0")
    rp = RecursiveParams.from_params(t, k)
    q, r = rp.q, rp.r
    coeff = _coefficient(t, k, rp)
    if rp.case is Case.R_EQ_TM1:
        remainder = math.comb(v, t - 1)
    else:
        remainder = q * math.comb(t - 1, r) * math.comb(v, t - 1)
        if rp.case is Case.LOW:
            remainder += sum(
                q
                * (q - 1)
                * math.comb(t - 1, m)
                * math.comb(t - 1, t - 1 + r - m)
                * math.comb(v, t - 1)
                for m in range(r + 1, t // q + 1)
            )
    return SizePrediction(
        predicted_blocks=coeff * base_blocks + remainder,
        coefficient=coeff,
        case=rp.case,
    )


def asymptotic_expansion(t: int, k: int) -> Fraction:
    """Limit of the recursive construction's expansion factor for fixed
    (t, k) as v grows: the case coefficient divided by q**t, exactly."""
    if not (2 <= t <= k):
        raise ValueError("need 2 <= t <= k")
    rp = RecursiveParams.from_params(t, k)
    return Fraction(_coefficient(t, k, rp), rp.q**t)

"""Storage arrays and exact skip-cost repair search.

A code is a k x N array over [1,v]; each column holds the k symbols of one
block in some order.  Repairing an erased column means partitioning its value
set among at most `locality` distinct helper columns, each helper sending one
subset of its entries.  The skip cost of one transmission is the number of
rows skipped between the first and last transmitted entry; the cost of a
repair is the sum over helpers, minimized over all plans; the cost of the
array is the maximum over erased columns.

The search is exact: it enumerates set partitions of the erased value set
(restricted-growth-string order) and solves a minimum-cost bipartite
assignment of parts to helper columns for each partition.  Zero-cost plans
are found first through an index of all row-contiguous value sets, which
reduces each partition check to a bipartite matching feasibility test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .designs import CoveringDesign, DesignParams

__all__ = [
    "MAX_PARTITION_ELEMENTS",
    "CapacityError",
    "ArrayFormatError",
    "CfrArray",
    "parse_array",
    "serialize_array",
    "Transmission",
    "RepairPlan",
    "ZeroSkipResult",
    "transmission_cost",
    "zero_cost_plan",
    "column_repair_cost",
    "is_zero_skip",
    "array_skip_cost",
    "brute_force_column_repair_cost",
    "replication_profile",
    "expansion_factor",
    "default_locality",
    "CodeReport",
    "build_report",
]

# Set-partition enumeration is the dominant cost; Bell(12) ~ 4.2M is the
# documented desk-scale ceiling.
MAX_PARTITION_ELEMENTS = 12


class CapacityError(ValueError):
    """Exact search refused: too many erased values to enumerate partitions."""


class ArrayFormatError(ValueError):
    """Bad array text; carries the offending line number if known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class CfrArray:
    """Immutable k x n array over [1,v]; column j is an arrangement of a block.

    Columns and rows are 1-based in the public interface, matching the text
    format and the repair-plan reporting.
    """

    k: int
    n: int
    v: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 1 or self.n < 1 or self.v < 1:
            raise ValueError("array dimensions must be positive")
        if len(self.columns) != self.n:
            raise ValueError(f"expected {self.n} columns, got {len(self.columns)}")
        for j, col in enumerate(self.columns, start=1):
            if len(col) != self.k:
                raise ValueError(f"column {j} has {len(col)} entries, expected {self.k}")
            if len(set(col)) != self.k:
                raise ValueError(f"column {j} repeats a value: {col}")
            if min(col) < 1 or max(col) > self.v:
                raise ValueError(f"column {j} has values outside [1, {self.v}]")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], v: int) -> "CfrArray":
        cols = tuple(tuple(c) for c in columns)
        if not cols:
            raise ValueError("array needs at least one column")
        return cls(k=len(cols[0]), n=len(cols), v=v, columns=cols)

    @classmethod
    def from_design(cls, design: CoveringDesign) -> "CfrArray":
        """Blocks as columns in multiset order, each column ascending."""
        return cls.from_columns(design.blocks, design.params.v)

    def column(self, j: int) -> tuple[int, ...]:
        if not (1 <= j <= self.n):
            raise ValueError(f"column index {j} outside [1, {self.n}]")
        return self.columns[j - 1]

    @cached_property
    def column_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(col) for col in self.columns)

    @cached_property
    def _interval_index(self) -> dict[frozenset[int], tuple[int, ...]]:
        """Map each row-contiguous value set to the ascending list of columns
        where it occupies consecutive rows.  Distinct per column because
        column values are distinct."""
        index: dict[frozenset[int], list[int]] = {}
        for j, col in enumerate(self.columns, start=1):
            for lo in range(self.k):
                for hi in range(lo + 1, self.k + 1):
                    index.setdefault(frozenset(col[lo:hi]), []).append(j)
        return {key: tuple(cols) for key, cols in index.items()}


def parse_array(text: str) -> CfrArray:
    """Parse the array text format: header line "k N v", then k lines of N
    space-separated integers (row-major); '#' and blank lines are ignored."""
    rows: list[list[int]] = []
    header: tuple[int, int, int] | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise ArrayFormatError(f"malformed token in {line!r}", line_no) from None
        if header is None:
            if len(values) != 3:
                raise ArrayFormatError("header must be 'k N v'", line_no)
            header = (values[0], values[1], values[2])
            continue
        if len(values) != header[1]:
            raise ArrayFormatError(
                f"expected {header[1]} entries in row, got {len(values)}", line_no
            )
        rows.append(values)
    if header is None:
        raise ArrayFormatError("missing header line 'k N v'")
    k, n, v = header
    if len(rows) != k:
        raise ArrayFormatError(f"expected {k} rows, got {len(rows)}")
    columns = tuple(tuple(rows[i][j] for i in range(k)) for j in range(n))
    try:
        return CfrArray(k=k, n=n, v=v, columns=columns)
    except ValueError as exc:
        raise ArrayFormatError(str(exc)) from None


def serialize_array(array: CfrArray) -> str:
    lines = [f"{array.k} {array.n} {array.v}"]
    for i in range(array.k):
        lines.append(" ".join(str(col[i]) for col in array.columns))
    return "\n".join(lines) + "\n"


def transmission_cost(column: Sequence[int], values: Iterable[int]) -> int:
    """Rows skipped when reading `values` from `column`: with row positions
    i_1 < ... < i_t of the requested values, the cost is i_t - i_1 - (t-1).
    Zero for singletons."""
    wanted = frozenset(values)
    if not wanted:
        raise ValueError("transmission must request at least one value")
    positions = [i for i, x in enumerate(column) if x in wanted]
    if len(positions) != len(wanted):
        missing = wanted - set(column)
        raise ValueError(f"values {sorted(missing)} not present in column {tuple(column)}")
    return positions[-1] - positions[0] - (len(positions) - 1)


@dataclass(frozen=True)
class Transmission:
    """One helper's contribution: the helper column and the 1-based ascending
    row indices it reads."""

    helper: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("empty transmissions are not allowed")
        if any(b <= a for a, b in zip(self.rows, self.rows[1:])):
            raise ValueError(f"rows must be strictly increasing, got {self.rows}")

    @property
    def cost(self) -> int:
        return self.rows[-1] - self.rows[0] - (len(self.rows) - 1)

    def values(self, array: CfrArray) -> frozenset[int]:
        col = array.column(self.helper)
        return frozenset(col[r - 1] for r in self.rows)


@dataclass(frozen=True)
class RepairPlan:
    erased: int
    transmissions: tuple[Transmission, ...]
    total_cost: int

    def validate(self, array: CfrArray, locality: int) -> None:
        helpers = [t.helper for t in self.transmissions]
        assert len(helpers) == len(set(helpers)), "helpers must be distinct"
        assert len(helpers) <= locality, "plan exceeds locality"
        assert self.erased not in helpers, "erased column cannot help itself"
        sent: list[frozenset[int]] = [t.values(array) for t in self.transmissions]
        union: set[int] = set()
        for vals in sent:
            assert not (union & vals), "transmitted value sets must be disjoint"
            union |= vals
        assert union == set(array.column(self.erased)), "plan must cover the erased column"
        assert self.total_cost == sum(t.cost for t in self.transmissions)


class ZeroSkipResult(NamedTuple):
    ok: bool
    plans: tuple[RepairPlan, ...] | None  # per column, when ok
    failing_column: int | None  # first column with no zero-cost plan


def _rgs_partitions(items: Sequence, max_parts: int) -> Iterator[list[tuple]]:
    """Set partitions of `items` into at most `max_parts` nonempty parts, in
    restricted-growth-string lexicographic order.  Parts are ordered by first
    occurrence, so for ascending items the part minima ascend."""
    n = len(items)
    if n == 0:
        return
    labels = [0] * n

    def rec(i: int, mx: int) -> Iterator[list[tuple]]:
        if i == n:
            parts: list[list] = [[] for _ in range(mx + 1)]
            for pos, lab in enumerate(labels):
                parts[lab].append(items[pos])
            yield [tuple(p) for p in parts]
            return
        top = min(mx + 1, max_parts - 1)
        for lab in range(top + 1):
            labels[i] = lab
            yield from rec(i + 1, mx if lab <= mx else lab)

    yield from rec(1, 0)


def _has_matching(candidates: Sequence[Sequence[int]], banned: frozenset[int]) -> bool:
    """Can every part be assigned a distinct helper from its candidate list,
    avoiding `banned`?  Kuhn's augmenting-path matching; the part side is tiny."""
    match_of: dict[int, int] = {}

    def augment(i: int, visited: set[int]) -> bool:
        for h in candidates[i]:
            if h in banned or h in visited:
                continue
            visited.add(h)
            if h not in match_of or augment(match_of[h], visited):
                match_of[h] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(candidates)))


def _lex_feasible_assignment(candidates: Sequence[Sequence[int]]) -> list[int] | None:
    """Lexicographically smallest vector of distinct helpers, one per part,
    each drawn from its (ascending) candidate list; None if infeasible."""
    chosen: list[int] = []
    used: set[int] = set()
    for i in range(len(candidates)):
        for h in candidates[i]:
            if h in used:
                continue
            if _has_matching(candidates[i + 1 :], frozenset(used | {h})):
                chosen.append(h)
                used.add(h)
                break
        else:
            return None
    return chosen


def _plan_from_assignment(
    array: CfrArray, erased: int, parts: Sequence[tuple[int, ...]], helpers: Sequence[int]
) -> RepairPlan:
    transmissions = []
    total = 0
    for part, h in zip(parts, helpers):
        col = array.column(h)
        wanted = set(part)
        rows = tuple(i + 1 for i, x in enumerate(col) if x in wanted)
        tr = Transmission(helper=h, rows=rows)
        transmissions.append(tr)
        total += tr.cost
    return RepairPlan(erased=erased, transmissions=tuple(transmissions), total_cost=total)


def _check_capacity(array: CfrArray) -> None:
    if array.k > MAX_PARTITION_ELEMENTS:
        raise CapacityError(
            f"exact search supports at most {MAX_PARTITION_ELEMENTS} values per "
            f"column, got k={array.k}"
        )


def zero_cost_plan(array: CfrArray, erased: int, locality: int) -> RepairPlan | None:
    """The canonical zero-cost repair plan for the erased column, or None.

    A part can be read at zero cost from a helper only if its values occupy
    consecutive rows there, so each candidate partition reduces to a matching
    feasibility test against the contiguous-run index.  The first feasible
    partition in enumeration order with the lexicographically smallest helper
    vector is returned.
    """
    _check_capacity(array)
    if locality < 1:
        raise ValueError("locality must be >= 1")
    values = sorted(array.column(erased))
    index = array._interval_index
    for parts in _rgs_partitions(values, locality):
        candidates = []
        for part in parts:
            cols = [j for j in index.get(frozenset(part), ()) if j != erased]
            if not cols:
                break
            candidates.append(cols)
        else:
            helpers = _lex_feasible_assignment(candidates)
            if helpers is not None:
                plan = _plan_from_assignment(array, erased, parts, helpers)
                plan.validate(array, locality)
                assert plan.total_cost == 0
                return plan
    return None


def _assignment_min_cost(
    array: CfrArray,
    erased: int,
    parts: Sequence[tuple[int, ...]],
    banned: frozenset[int] = frozenset(),
) -> int | None:
    """Minimum total cost of assigning parts to distinct helper columns, or
    None if no full assignment exists."""
    others = [j for j in range(1, array.n + 1) if j != erased and j not in banned]
    if len(parts) > len(others):
        return None
    sets = array.column_sets
    matrix = np.full((len(parts), len(others)), np.inf)
    for i, part in enumerate(parts):
        pset = frozenset(part)
        row_feasible = False
        for jj, j in enumerate(others):
            if pset <= sets[j - 1]:
                matrix[i, jj] = transmission_cost(array.columns[j - 1], pset)
                row_feasible = True
        if not row_feasible:
            return None
    try:
        rows, cols = linear_sum_assignment(matrix)
    except ValueError:
        return None
    total = matrix[rows, cols].sum()
    if math.isinf(total):
        return None
    return int(total)


def _lex_min_cost_assignment(
    array: CfrArray, erased: int, parts: Sequence[tuple[int, ...]], target: int
) -> list[int]:
    """Lexicographically smallest helper vector achieving exactly `target`,
    which must be the minimum cost for this partition."""
    sets = array.column_sets
    used: list[int] = []
    remaining = target
    for i, part in enumerate(parts):
        pset = frozenset(part)
        tail_parts = parts[i + 1 :]
        for j in range(1, array.n + 1):
            if j == erased or j in used or not pset <= sets[j - 1]:
                continue
            c = transmission_cost(array.columns[j - 1], pset)
            if c > remaining:
                continue
            if not tail_parts:
                if c == remaining:
                    used.append(j)
                    remaining = 0
                    break
                continue
            tail = _assignment_min_cost(array, erased, tail_parts, frozenset(used) | {j})
            if tail is not None and c + tail == remaining:
                used.append(j)
                remaining -= c
                break
        else:
            raise RuntimeError("internal error: could not reconstruct optimal assignment")
    return used


def column_repair_cost(array: CfrArray, erased: int, locality: int) -> RepairPlan | None:
    """Exact minimum-skip-cost repair plan for the erased column, or None when
    no plan exists within the locality (infeasible, distinct from cost 0).

    Enumerates set partitions of the erased value set into at most `locality`
    nonempty parts and solves a minimum-cost assignment of parts to helper
    columns per partition.  Ties break on the first optimal partition in
    enumeration order, then the lexicographically smallest helper vector.
    """
    _check_capacity(array)
    if not (1 <= erased <= array.n):
        raise ValueError(f"erased column {erased} outside [1, {array.n}]")
    if locality < 1:
        raise ValueError("locality must be >= 1")

    plan = zero_cost_plan(array, erased, locality)
    if plan is not None:
        return plan

    values = sorted(array.column(erased))
    best: int | None = None
    best_parts: list[tuple[int, ...]] | None = None
    for parts in _rgs_partitions(values, locality):
        cost = _assignment_min_cost(array, erased, parts)
        if cost is not None and (best is None or cost < best):
            best, best_parts = cost, parts
    if best is None or best_parts is None:
        return None
    helpers = _lex_min_cost_assignment(array, erased, best_parts, best)
    plan = _plan_from_assignment(array, erased, best_parts, helpers)
    plan.validate(array, locality)
    assert plan.total_cost == best
    return plan


def is_zero_skip(array: CfrArray, locality: int) -> ZeroSkipResult:
    """True iff every column has a zero-cost repair plan at the locality.
    Returns the per-column plans on success, else the first failing column
    (which covers outright infeasibility as well)."""
    plans = []
    for j in range(1, array.n + 1):
        plan = zero_cost_plan(array, j, locality)
        if plan is None:
            return ZeroSkipResult(False, None, j)
        plans.append(plan)
    return ZeroSkipResult(True, tuple(plans), None)


def array_skip_cost(array: CfrArray, locality: int) -> int | None:
    """Maximum repair cost over all columns; None if any column is infeasible."""
    worst = 0
    for j in range(1, array.n + 1):
        plan = column_repair_cost(array, j, locality)
        if plan is None:
            return None
        worst = max(worst, plan.total_cost)
    return worst


def brute_force_column_repair_cost(array: CfrArray, erased: int, locality: int) -> int | None:
    """Independent oracle: enumerate every helper subset of size <= locality
    and every way to hand each erased value to one of those helpers.  Costs
    are recomputed inline from row positions.  Exponential; test scale only.
    """
    if not (1 <= erased <= array.n):
        raise ValueError(f"erased column {erased} outside [1, {array.n}]")
    erased_vals = list(array.column(erased))
    others = [j for j in range(1, array.n + 1) if j != erased]
    best: int | None = None
    for size in range(1, locality + 1):
        for helper_set in combinations(others, size):
            for assignment in product(range(size), repeat=len(erased_vals)):
                groups: list[list[int]] = [[] for _ in range(size)]
                for val, g in zip(erased_vals, assignment):
                    groups[g].append(val)
                cost = 0
                ok = True
                for g, vals in enumerate(groups):
                    if not vals:
                        continue
                    col = array.column(helper_set[g])
                    pos = [i for i, x in enumerate(col) if x in set(vals)]
                    if len(pos) != len(vals):
                        ok = False
                        break
                    cost += pos[-1] - pos[0] - (len(pos) - 1)
                if ok and (best is None or cost < best):
                    best = cost
    return best


def replication_profile(array: CfrArray) -> tuple[dict[int, int], int]:
    """Per-symbol appearance counts over [1,v] (zeros included) and their
    minimum.  The counts always sum to k*n."""
    counts = {a: 0 for a in range(1, array.v + 1)}
    for col in array.columns:
        for x in col:
            counts[x] += 1
    assert sum(counts.values()) == array.k * array.n
    return counts, min(counts.values())


def expansion_factor(n: int, params: DesignParams) -> Fraction:
    """Column count relative to the minimum block count C(v,t)/C(k,t)."""
    if n < 1:
        raise ValueError("column count must be >= 1")
    t, k, v = params.t, params.k, params.v
    return Fraction(n * math.comb(k, t), math.comb(v, t))


def default_locality(params: DesignParams) -> int:
    """The locality ceil(k/(t-1)) guaranteed for properly local designs."""
    if params.t < 2:
        raise ValueError("default locality is defined only for t >= 2")
    return -(-params.k // (params.t - 1))


@dataclass(frozen=True)
class CodeReport:
    """Code-level summary of an array: parameters, replication, locality,
    skip cost, and expansion factor, with the per-column repair plans."""

    n: int
    k: int
    v: int
    rho_min: int
    rho_profile: dict[int, int]
    locality: int
    skip_cost: int | None
    expansion_factor: Fraction
    per_column_plans: tuple[RepairPlan, ...] | None

    def to_text(self, include_plans: bool = False) -> str:
        xi = self.expansion_factor
        lines = [
            f"code: (N={self.n}, k={self.k}, rho={self.rho_min})_{self.v}",
            f"locality: {self.locality}",
            f"skip cost: {self.skip_cost if self.skip_cost is not None else 'infeasible'}",
            f"expansion factor: {format_ratio(xi)} ({xi})",
            "replication profile: "
            + " ".join(f"{a}:{self.rho_profile[a]}" for a in sorted(self.rho_profile)),
        ]
        if include_plans and self.per_column_plans is not None:
            for plan in self.per_column_plans:
                lines.append(f"column {plan.erased}: cost {plan.total_cost} " + _plan_text(plan))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        xi = self.expansion_factor
        lines = [
            "n,k,v,rho_min,locality,skip_cost,expansion_exact,expansion_2dp",
            f"{self.n},{self.k},{self.v},{self.rho_min},{self.locality},"
            f"{self.skip_cost if self.skip_cost is not None else ''},{xi},{format_ratio(xi)}",
        ]
        return "\n".join(lines) + "\n"


def _plan_text(plan: RepairPlan) -> str:
    return "; ".join(f"rows {list(t.rows)} from column {t.helper}" for t in plan.transmissions)


def format_ratio(value: Fraction, places: int = 2) -> str:
    """Decimal rendering with round-half-up, exact in integer arithmetic."""
    scaled = value * 10**places
    q, rem = divmod(scaled.numerator, scaled.denominator)
    if 2 * rem >= scaled.denominator:
        q += 1
    whole, frac = divmod(q, 10**places)
    return f"{whole}.{frac:0{places}d}"


def build_report(array: CfrArray, params: DesignParams, locality: int | None = None) -> CodeReport:
    """Full report for an array built from a design with these parameters."""
    if locality is None:
        locality = default_locality(params)
    profile, rho = replication_profile(array)
    plans: list[RepairPlan] | None = []
    worst: int | None = 0
    for j in range(1, array.n + 1):
        plan = column_repair_cost(array, j, locality)
        if plan is None:
            plans, worst = None, None
            break
        plans.append(plan)
        worst = max(worst, plan.total_cost)
    return CodeReport(
        n=array.n,
        k=array.k,
        v=array.v,
        rho_min=rho,
        rho_profile=profile,
        locality=locality,
        skip_cost=worst,
        expansion_factor=expansion_factor(array.n, params),
        per_column_plans=None if plans is None else tuple(plans),
    )

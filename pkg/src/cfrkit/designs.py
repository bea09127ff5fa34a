"""Covering designs: parsing, verification, and exact parameter bounds.

A (t,k,v) covering design is a multiset of k-subsets (blocks) of [1,v] such
that every t-subset of [1,v] lies in at least one block.  Blocks are kept in
canonical form (sorted ascending) but the multiset may contain duplicates.
All bound computations use exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple

__all__ = [
    "Block",
    "DesignParams",
    "CoveringDesign",
    "DesignError",
    "ParseError",
    "ElementRangeError",
    "BlockSizeError",
    "parse_design",
    "serialize_design",
    "load_design",
    "verify_covering",
    "replication_bound",
    "min_blocks_bound",
    "is_properly_local",
    "ProperLocality",
    "multiply_design",
]

Block = tuple[int, ...]


class DesignError(ValueError):
    """Bad covering-design input; carries the offending line number if known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ParseError(DesignError):
    """A token that is not a base-10 integer."""


class ElementRangeError(DesignError):
    """A block element outside [1, v]."""


class BlockSizeError(DesignError):
    """A block without exactly k distinct elements."""


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class DesignParams:
    """Parameters (t, k, v): strength, block size, point count."""

    t: int
    k: int
    v: int

    def __post_init__(self):
        if not (1 <= self.t <= self.k <= self.v):
            raise ValueError(
                f"covering-design parameters need 1 <= t <= k <= v, "
                f"got (t={self.t}, k={self.k}, v={self.v})"
            )


@dataclass(frozen=True)
class CoveringDesign:
    """An ordered multiset of canonical blocks over the point set [1, v].

    Construction canonicalizes each block (sorted ascending) and checks block
    arity and element range; it does NOT check the covering property, which is
    the job of :func:`verify_covering`.
    """

    params: DesignParams
    blocks: tuple[Block, ...]

    def __post_init__(self):
        k, v = self.params.k, self.params.v
        canonical = []
        for block in self.blocks:
            elems = tuple(sorted(block))
            if len(set(elems)) != k or len(elems) != k:
                raise BlockSizeError(
                    f"block {tuple(block)} does not have exactly {k} distinct elements"
                )
            if elems[0] < 1 or elems[-1] > v:
                raise ElementRangeError(f"block {tuple(block)} has elements outside [1, {v}]")
            canonical.append(elems)
        object.__setattr__(self, "blocks", tuple(canonical))

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def has_duplicate_blocks(self) -> bool:
        return len(set(self.blocks)) != len(self.blocks)


def parse_design(text: str | Iterable[str], params: DesignParams) -> CoveringDesign:
    """Parse a plain-text block list: one block per line, whitespace-separated
    1-based integers; '#' comment lines and blank lines are ignored.

    Blocks are canonicalized (sorted) but kept in file order; the covering
    property is not checked here.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    blocks: list[Block] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        elems = []
        for token in line.split():
            try:
                elems.append(int(token))
            except ValueError:
                raise ParseError(f"malformed token {token!r}", line_no) from None
        for x in elems:
            if not (1 <= x <= params.v):
                raise ElementRangeError(f"element {x} outside [1, {params.v}]", line_no)
        if len(set(elems)) != params.k:
            raise BlockSizeError(
                f"expected {params.k} distinct elements, got {sorted(set(elems))}", line_no
            )
        blocks.append(tuple(sorted(elems)))
    return CoveringDesign(params, tuple(blocks))


def serialize_design(design: CoveringDesign) -> str:
    """One block per line, elements ascending, space-separated, newline-terminated."""
    return "".join(" ".join(str(x) for x in block) + "\n" for block in design.blocks)


def load_design(path, params: DesignParams) -> CoveringDesign:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_design(fh.read(), params)


def verify_covering(design: CoveringDesign) -> list[Block]:
    """Return every t-subset of [1,v] contained in no block, in lexicographic
    order.  An empty list means the design is a valid covering design.

    Full enumeration of all C(v,t) t-subsets against the set of covered
    subsets; exact by construction, intended for desk scale (v <= ~40, t <= 6).
    """
    t, v = design.params.t, design.params.v
    covered: set[Block] = set()
    for block in design.blocks:
        covered.update(combinations(block, t))
    return [sub for sub in combinations(range(1, v + 1), t) if sub not in covered]


def replication_bound(params: DesignParams, s: int) -> Fraction:
    """Lower bound on the number of blocks containing any fixed s-subset:
    C(v-s, t-s) / C(k-s, t-s), returned exactly."""
    if not (1 <= s <= params.t):
        raise ValueError(f"s must be in [1, {params.t}], got {s}")
    t, k, v = params.t, params.k, params.v
    return Fraction(math.comb(v - s, t - s), math.comb(k - s, t - s))


def min_blocks_bound(params: DesignParams) -> Fraction:
    """Lower bound on the number of blocks: C(v,t) / C(k,t), returned exactly."""
    t, k, v = params.t, params.k, params.v
    return Fraction(math.comb(v, t), math.comb(k, t))


class ProperLocality(NamedTuple):
    ok: bool
    replication_floor: int  # ceil((v-t+1)/(k-t+1)), guaranteed blocks per (t-1)-subset
    threshold: int  # ceil(k/(t-1)) + 1


def is_properly_local(params: DesignParams) -> ProperLocality:
    """Check ceil((v-t+1)/(k-t+1)) >= ceil(k/(t-1)) + 1, the condition that
    guarantees repair locality ceil(k/(t-1)); returns both compared sides."""
    t, k, v = params.t, params.k, params.v
    if t < 2:
        raise ValueError("proper locality is defined only for t >= 2")
    lhs = _ceil_div(v - t + 1, k - t + 1)
    rhs = _ceil_div(k, t - 1) + 1
    return ProperLocality(lhs >= rhs, lhs, rhs)


def multiply_design(design: CoveringDesign, n: int) -> CoveringDesign:
    """The design with n copies of each block (copies adjacent, input order)."""
    if n < 1:
        raise ValueError(f"multiplicity must be >= 1, got {n}")
    blocks = tuple(block for block in design.blocks for _ in range(n))
    return CoveringDesign(design.params, blocks)

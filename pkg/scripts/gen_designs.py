#!/usr/bin/env python3
"""Regenerate the covering-design corpus under data/designs/.

Every design is verified with cfrkit.verify_covering before it is written,
so a successful run guarantees valid files.  Outputs are deterministic:
the algebraic constructions are closed-form and the local search is seeded.

  3-4-5-4     hand-listed
  2-3-5-4     hand-listed
  2-4-5-3     hand-listed
  2-3-7-7     Fano plane (hand-listed)
  5-6-6-1     the single full block
  3-4-8-14    supports of the weight-4 words of the [8,4] Reed-Muller code
  5-6-12-132  supports of the weight-6 words of the extended ternary Golay
              code (the S(5,6,12) Steiner system), generator polynomial taken
              from the degree-5 factorization of x^11 - 1 over GF(3)
  4-6-12-41   seeded single-point-exchange annealing
"""

from __future__ import annotations

import math
import random
import sys
from itertools import combinations, product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cfrkit import CoveringDesign, DesignParams, serialize_design, verify_covering

OUT_DIR = Path(__file__).resolve().parent.parent / "data" / "designs"

HAND_DESIGNS = {
    (3, 4, 5): [(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 4, 5), (1, 3, 4, 5)],
    (2, 3, 5): [(1, 2, 3), (1, 4, 5), (2, 4, 5), (3, 4, 5)],
    (2, 4, 5): [(1, 2, 3, 4), (1, 2, 4, 5), (1, 3, 4, 5)],
    (2, 3, 7): [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)],
    (5, 6, 6): [(1, 2, 3, 4, 5, 6)],
}


def steiner_quadruple_8() -> list[tuple[int, ...]]:
    """Supports of the fourteen weight-4 codewords of the [8,4,4] first-order
    Reed-Muller code: evaluations of affine Boolean functions on GF(2)^3."""
    points = list(product((0, 1), repeat=3))
    blocks = set()
    for a0, a1, a2, a3 in product((0, 1), repeat=4):
        word = [(a0 + a1 * x + a2 * y + a3 * z) % 2 for x, y, z in points]
        if sum(word) == 4:
            blocks.add(tuple(i + 1 for i, bit in enumerate(word) if bit))
    return sorted(blocks)


def steiner_5_6_12() -> list[tuple[int, ...]]:
    """Supports of the weight-6 codewords of the extended ternary Golay code.

    The cyclic [11,6] ternary Golay code is generated by
    g(x) = x^5 + 2x^3 + x^2 + 2x + 2 (a degree-5 factor of x^11 - 1 over
    GF(3)); appending the negated coordinate sum extends it to [12,6,6].
    The 264 weight-6 words give 132 distinct supports.
    """
    n = 11
    g = [2, 2, 1, 2, 0, 1]  # x^0 .. x^5 coefficients

    def mul_mod(msg: tuple[int, ...]) -> list[int]:
        out = [0] * n
        for i, a in enumerate(msg):
            if a == 0:
                continue
            for j, b in enumerate(g):
                if b == 0:
                    continue
                out[(i + j) % n] = (out[(i + j) % n] + a * b) % 3
        return out

    supports = set()
    weights = {0: 0, 6: 0, 9: 0, 12: 0}
    for msg in product(range(3), repeat=6):
        word = mul_mod(msg)
        word.append((-sum(word)) % 3)
        w = sum(1 for c in word if c)
        weights[w] += 1
        if w == 6:
            supports.add(tuple(i + 1 for i, c in enumerate(word) if c))
    if weights != {0: 1, 6: 264, 9: 440, 12: 24} or len(supports) != 132:
        raise RuntimeError(f"unexpected Golay code shape: {weights}, {len(supports)} supports")
    return sorted(supports)


def anneal_covering(
    t: int, k: int, v: int, num_blocks: int, seed: int, steps: int = 1_000_000
) -> list[tuple[int, ...]] | None:
    """Search for a (t,k,v) covering with exactly num_blocks blocks by
    single-point-exchange annealing on the uncovered-t-subset count."""
    t_subsets = list(combinations(range(1, v + 1), t))
    index = {s: i for i, s in enumerate(t_subsets)}

    def subsets_of(block: list[int]) -> list[int]:
        return [index[s] for s in combinations(tuple(sorted(block)), t)]

    rng = random.Random(seed)
    blocks = [sorted(rng.sample(range(1, v + 1), k)) for _ in range(num_blocks)]
    hit = [0] * len(t_subsets)
    for b in blocks:
        for qi in subsets_of(b):
            hit[qi] += 1
    missing = sum(1 for h in hit if h == 0)
    temp, t0, cooling = 0.6, 0.6, 0.9995

    for _ in range(steps):
        if missing == 0:
            result = sorted(tuple(b) for b in blocks)
            if len(set(result)) != num_blocks:
                missing = 1  # duplicate blocks: keep searching
                continue
            return result
        bi = rng.randrange(num_blocks)
        block = blocks[bi]
        pi = rng.randrange(k)
        new_pt = rng.choice([p for p in range(1, v + 1) if p not in block])
        new_block = sorted(block[:pi] + block[pi + 1 :] + [new_pt])
        old_quads = subsets_of(block)
        new_quads = subsets_of(new_block)
        newly_uncovered = 0
        for q in old_quads:
            hit[q] -= 1
            if hit[q] == 0:
                newly_uncovered += 1
        newly_covered = 0
        for q in new_quads:
            if hit[q] == 0:
                newly_covered += 1
            hit[q] += 1
        delta = newly_uncovered - newly_covered
        if delta <= 0 or rng.random() < math.exp(-delta / temp):
            blocks[bi] = new_block
            missing += delta
        else:
            for q in new_quads:
                hit[q] -= 1
            for q in old_quads:
                hit[q] += 1
        temp *= cooling
        if temp < 0.05:
            temp = t0
    return None


def write_design(t: int, k: int, v: int, blocks) -> None:
    design = CoveringDesign(DesignParams(t, k, v), tuple(blocks))
    uncovered = verify_covering(design)
    if uncovered:
        raise RuntimeError(f"({t},{k},{v}) candidate not a covering: {uncovered[:3]}")
    path = OUT_DIR / f"{t}-{k}-{v}-{design.num_blocks}.txt"
    header = f"# ({t},{k},{v}) covering design, {design.num_blocks} blocks\n"
    path.write_text(header + serialize_design(design), encoding="utf-8")
    print(f"wrote {path.name}")


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for (t, k, v), blocks in HAND_DESIGNS.items():
        write_design(t, k, v, blocks)
    write_design(3, 4, 8, steiner_quadruple_8())
    write_design(5, 6, 12, steiner_5_6_12())
    blocks = anneal_covering(4, 6, 12, num_blocks=41, seed=1)
    if blocks is None:
        raise RuntimeError("annealing did not reach 41 blocks; try another seed")
    write_design(4, 6, 12, blocks)
    return 0


if __name__ == "__main__":
    sys.exit(main())

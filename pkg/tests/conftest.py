from __future__ import annotations

from pathlib import Path

import pytest

from cfrkit import CfrArray, CoveringDesign, DesignParams, load_design

REPO = Path(__file__).resolve().parent.parent
DESIGN_DIR = REPO / "data" / "designs"
ARRAY_DIR = REPO / "data" / "arrays"

# (t, k, v, block count) of every committed corpus design
CORPUS = [
    (3, 4, 5, 4),
    (2, 3, 5, 4),
    (2, 4, 5, 3),
    (2, 3, 7, 7),
    (5, 6, 6, 1),
    (3, 4, 8, 14),
    (5, 6, 12, 132),
    (4, 6, 12, 41),
]


def corpus_path(t: int, k: int, v: int, n: int) -> Path:
    return DESIGN_DIR / f"{t}-{k}-{v}-{n}.txt"


def corpus_design(t: int, k: int, v: int, n: int) -> CoveringDesign:
    design = load_design(corpus_path(t, k, v, n), DesignParams(t, k, v))
    assert design.num_blocks == n
    return design


@pytest.fixture(scope="session")
def reference_array() -> CfrArray:
    """The 4x6 demonstration array: zero skip cost at locality 2."""
    return CfrArray.from_columns(
        [(1, 2, 3, 5), (2, 3, 4, 6), (1, 3, 4, 5), (2, 4, 5, 6), (1, 3, 5, 6), (1, 2, 4, 6)],
        v=6,
    )


@pytest.fixture(scope="session")
def design_345() -> CoveringDesign:
    return corpus_design(3, 4, 5, 4)


@pytest.fixture(scope="session")
def design_56_12() -> CoveringDesign:
    return corpus_design(5, 6, 12, 132)


@pytest.fixture(scope="session")
def design_46_12() -> CoveringDesign:
    return corpus_design(4, 6, 12, 41)

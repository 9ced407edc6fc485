"""Reference digit sets with known harmonic sums and densities.

These record sets and their 5-decimal values serve as regression
fixtures: the `tables` command and the acceptance suite recompute each
entry from its digit set with certified precision and compare.  Values
are reproduced at 1e-5 (harmonic sums, densities) or 1e-4 (composite
anchors, which are quoted to fewer decimals).
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "GoldenSum",
    "GoldenDensity",
    "CompositeAnchor",
    "TABLE_3FREE",
    "TABLE_4FREE",
    "TABLE_4FREE_LARGE",
    "TABLE_DENSITY",
    "COMPOSITE_ANCHORS",
    "SUM_TOLERANCE",
    "COMPOSITE_TOLERANCE",
]

SUM_TOLERANCE = 1e-5
COMPOSITE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class GoldenSum:
    """A digit set whose shifted harmonic sum H(K(S,b)+1) is known."""

    hsum: float
    b: int
    digits: tuple[int, ...]


@dataclass(frozen=True)
class GoldenDensity:
    """A k-free digit set with a notable logarithmic density."""

    density: float
    k: int
    b: int
    digits: tuple[int, ...]


@dataclass(frozen=True)
class CompositeAnchor:
    """Harmonic sum of {1..head} joined with a shifted Kempner set.

    value = H_head + sum over K(S, b) of 1/(x + head + 1); the union is
    k-free because the head block sits below the shifted set.
    """

    label: str
    k: int
    head: int
    b: int
    digits: tuple[int, ...]
    value: float


_B61_10FREE = (
    0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 15, 16, 17, 18, 19, 20, 21,
    22, 24, 26, 27, 28, 29, 30, 31, 33, 34, 35, 37, 38, 39, 42, 43, 46, 47,
    49, 51, 52, 53, 54, 59,
)

# Largest known 3-free shifted harmonic sums for bases up to 120 (k = 3).
TABLE_3FREE: tuple[GoldenSum, ...] = (
    GoldenSum(3.00794, 3, (0, 1)),
    GoldenSum(3.00118, 82, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 37, 39, 40)),
    GoldenSum(2.99461, 83, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 37, 39, 40)),
    GoldenSum(2.99312, 81, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 37, 39, 67)),
    GoldenSum(2.99260, 81, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 37, 40, 66)),
    GoldenSum(2.99146, 81, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 39, 40, 64)),
    GoldenSum(2.99083, 81, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 37, 39, 40, 63)),
    GoldenSum(2.98823, 84, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 37, 39, 40)),
    GoldenSum(2.98700, 81, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 36, 37, 39, 40, 58)),
    GoldenSum(2.98605, 81, (0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 31, 36, 37, 39, 40, 57)),
)

# Largest known 4-free shifted harmonic sums for bases up to 60 (k = 4).
TABLE_4FREE: tuple[GoldenSum, ...] = (
    GoldenSum(4.43975, 55, (0, 1, 2, 4, 5, 9, 10, 11, 14, 16, 17, 18, 21, 24, 30,
                            37, 39, 41, 42, 45, 47)),
    GoldenSum(4.42175, 11, (0, 1, 2, 4, 5, 7)),
    GoldenSum(4.41989, 22, (0, 1, 2, 4, 5, 7, 8, 9, 14, 17)),
    GoldenSum(4.36437, 55, (0, 1, 2, 4, 7, 8, 9, 13, 14, 16, 17, 18, 26, 28, 31,
                            32, 34, 36, 43, 49, 52)),
    GoldenSum(4.32651, 55, (0, 1, 2, 4, 5, 7, 8, 13, 14, 16, 17, 18, 26, 28, 32,
                            34, 36, 43, 49, 52)),
    GoldenSum(4.30467, 55, (0, 1, 2, 4, 5, 9, 10, 11, 14, 16, 17, 18, 21, 24, 30,
                            37, 39, 41, 42, 47)),
    GoldenSum(4.30139, 55, (0, 1, 2, 4, 5, 9, 10, 11, 14, 16, 17, 18, 21, 24, 30,
                            37, 39, 41, 45, 47)),
    GoldenSum(4.30021, 55, (0, 1, 2, 4, 5, 9, 10, 11, 14, 16, 17, 18, 21, 24, 30,
                            37, 39, 42, 45, 47)),
    GoldenSum(4.29770, 55, (0, 1, 2, 4, 5, 9, 10, 11, 14, 16, 17, 18, 21, 24, 30,
                            37, 41, 42, 45, 47)),
    GoldenSum(4.29497, 55, (0, 1, 2, 4, 5, 9, 10, 11, 14, 16, 17, 18, 21, 24, 30,
                            39, 41, 42, 45, 47)),
)

# Best 4-free results from constrained sweeps over larger moduli (k = 4).
TABLE_4FREE_LARGE: tuple[GoldenSum, ...] = (
    GoldenSum(4.43975, 55, TABLE_4FREE[0].digits),
    GoldenSum(4.42175, 11, TABLE_4FREE[1].digits),
    GoldenSum(4.41989, 22, TABLE_4FREE[2].digits),
    GoldenSum(4.37406, 105, (0, 1, 2, 4, 5, 7, 8, 9, 15, 16, 18, 19, 20, 25, 26,
                             28, 29, 31, 32, 33, 36, 45, 50, 51, 59, 61, 63, 68,
                             70, 72, 79)),
    GoldenSum(4.36953, 177, (0, 1, 2, 4, 5, 7, 8, 9, 15, 16, 17, 19, 20, 26, 27,
                             29, 30, 32, 33, 34, 50, 52, 55, 56, 57, 59, 62, 63,
                             64, 66, 72, 75, 76, 79, 87, 90, 93, 101, 103, 107,
                             109, 113, 126, 133, 137, 146)),
    GoldenSum(4.36437, 55, TABLE_4FREE[3].digits),
    GoldenSum(4.36280, 153, (0, 1, 2, 4, 5, 7, 8, 9, 15, 16, 17, 19, 20, 26, 27,
                             28, 30, 31, 33, 34, 50, 54, 55, 56, 58, 59, 63, 65,
                             68, 69, 71, 72, 76, 78, 91, 93, 96, 98, 99, 101, 103)),
    GoldenSum(4.36238, 141, (0, 1, 2, 4, 5, 7, 8, 9, 14, 16, 17, 18, 26, 28, 29,
                             31, 32, 33, 36, 37, 39, 51, 52, 53, 56, 57, 58, 60,
                             61, 68, 69, 70, 72, 86, 94, 95, 96, 129, 130)),
    GoldenSum(4.36233, 153, (0, 1, 2, 4, 5, 7, 8, 9, 15, 16, 17, 19, 20, 26, 27,
                             28, 30, 31, 33, 34, 50, 54, 55, 57, 58, 59, 63, 65,
                             68, 69, 71, 72, 76, 78, 91, 93, 96, 98, 99, 101, 103)),
    GoldenSum(4.36022, 195, (0, 1, 2, 4, 5, 7, 8, 9, 15, 16, 18, 19, 20, 25, 26,
                             28, 29, 31, 32, 33, 45, 49, 51, 52, 53, 59, 60, 61,
                             63, 67, 68, 72, 79, 80, 82, 84, 87, 90, 98, 102, 104,
                             108, 110, 112, 118, 120, 122, 130)),
)

# k-free digit sets of unusually large logarithmic density.
TABLE_DENSITY: tuple[GoldenDensity, ...] = (
    GoldenDensity(0.63093, 3, 3, (0, 1)),
    GoldenDensity(0.63767, 3, 37, (0, 1, 3, 7, 17, 24, 25, 28, 29, 35)),
    GoldenDensity(0.63773, 3, 85, (0, 1, 3, 4, 9, 10, 13, 24, 28, 29, 31, 36, 40,
                                   42, 50, 66, 73)),
    GoldenDensity(0.74722, 4, 11, (0, 1, 2, 4, 5, 7)),
    GoldenDensity(0.75974, 4, 55, TABLE_4FREE[0].digits),
    GoldenDensity(0.86135, 5, 5, (0, 1, 2, 3)),
    GoldenDensity(0.92078, 7, 7, (0, 1, 2, 3, 4, 5)),
    GoldenDensity(0.92053, 10, 61, _B61_10FREE),
)

# Composite-k lower bounds: a head block {1..head} ahead of the greedy
# prime set shifted past it, plus the sporadic 10-free base-61 set.
COMPOSITE_ANCHORS: tuple[CompositeAnchor, ...] = (
    CompositeAnchor("k=6 head+greedy5", 6, 1, 5, (0, 1, 2, 3), 7.94433),
    CompositeAnchor("k=8 head+greedy7", 8, 1, 7, (0, 1, 2, 3, 4, 5), 13.5332),
    CompositeAnchor("k=9 head+greedy7", 9, 2, 7, (0, 1, 2, 3, 4, 5), 13.5638),
    CompositeAnchor("k=10 head+greedy7", 10, 3, 7, (0, 1, 2, 3, 4, 5), 13.5905),
    CompositeAnchor("k=10 base 61", 10, 0, 61, _B61_10FREE, 13.5865),
)

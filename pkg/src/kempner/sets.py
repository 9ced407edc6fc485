"""Kempner sets: integers whose base-b digits all lie in a fixed digit set.

K(S, b) is the set of non-negative integers whose canonical base-b
expansion uses only digits from S, a proper subset of [0, b-1]; the
integer 0 belongs exactly when 0 is in S (its expansion is the single
digit 0).  A KempnerSpec optionally translates the whole set by a
non-negative shift, written K(S, b) + n.

Besides membership and enumeration this module houses the k-freeness
certificate (0 in S plus S k-free mod b implies K(S, b) k-free), the
reverse construction that embeds any finite k-free set into a shifted
Kempner set without losing harmonic sum, greedy k-free sequences, and
the exact longest-progression oracle used to validate all of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .progressions import (
    NotKFreeError,
    ResidueSet,
    find_integer_ap,
    is_kfree_mod,
)

__all__ = [
    "KempnerSpec",
    "contains",
    "iter_members",
    "enumerate_upto",
    "log_density",
    "longest_ap",
    "kfree_certificate",
    "approximate_by_kempner",
    "greedy_set",
]

# The pairwise DP table is quadratic in memory (int16 entries).
_LONGEST_AP_LIMIT = 15_000


@dataclass(frozen=True)
class KempnerSpec:
    """K(S, b) + shift for a proper digit subset S of [0, b-1]."""

    digits: ResidueSet
    shift: int = 0

    def __post_init__(self):
        if len(self.digits) >= self.digits.b:
            raise ValueError("digit set must be a proper subset of [0, b-1]")
        if self.shift < 0:
            raise ValueError(f"shift must be non-negative, got {self.shift}")


def contains(spec: KempnerSpec, x: int) -> bool:
    """True iff x - shift is non-negative and all its base-b digits lie in S."""
    y = x - spec.shift
    if y < 0:
        return False
    allowed = set(spec.digits.members)
    b = spec.digits.b
    if y == 0:
        return 0 in allowed
    while y:
        y, d = divmod(y, b)
        if d not in allowed:
            return False
    return True


def _digit_odometer(digits: ResidueSet) -> Iterator[int]:
    """Canonical members of K(S, b) in increasing order.

    Runs an odometer over indices into the sorted digit tuple, most
    significant position first; the leading position never drops below
    the smallest nonzero digit, so no padded representations appear.
    """
    S = digits.members
    b = digits.b
    if not S:
        return
    if S[0] == 0:
        yield 0
    lead = 1 if S[0] == 0 else 0
    if lead >= len(S):
        return  # S == {0}
    top = len(S) - 1
    idx = [lead]
    while True:
        v = 0
        for i in idx:
            v = v * b + S[i]
        yield v
        p = len(idx) - 1
        while p >= 0 and idx[p] == top:
            p -= 1
        if p < 0:
            idx = [lead] + [0] * len(idx)
        else:
            idx[p] += 1
            for q in range(p + 1, len(idx)):
                idx[q] = 0


def iter_members(spec: KempnerSpec) -> Iterator[int]:
    """Members of the shifted set in increasing order (unbounded)."""
    for v in _digit_odometer(spec.digits):
        yield v + spec.shift


def enumerate_upto(spec: KempnerSpec, limit: int) -> list[int]:
    """All members <= limit, ascending; cost proportional to the output."""
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    out = []
    for v in iter_members(spec):
        if v > limit:
            break
        out.append(v)
    return out


def log_density(spec: KempnerSpec) -> float:
    """Logarithmic density log|S| / log b, the counting-function exponent."""
    if len(spec.digits) < 1:
        raise ValueError("digit set must be non-empty")
    return math.log(len(spec.digits)) / math.log(spec.digits.b)


def longest_ap(values) -> tuple[int, tuple[int, int] | None]:
    """Length of the longest progression in a finite set, with a witness.

    Pairwise dynamic program over ending pairs: the progression ending
    (prev, cur) extends the one ending (prev - d, prev).  Quadratic time
    and memory; the witness is the (start, diff) pair, lexicographically
    smallest among progressions of maximal length.  Lengths 0/1 carry no
    witness; any two elements form a progression of length 2.
    """
    A = np.unique(np.fromiter(values, dtype=np.int64))
    n = int(A.size)
    if n == 0:
        return 0, None
    if n == 1:
        return 1, None
    if n > _LONGEST_AP_LIMIT:
        raise ValueError(
            f"set of {n} elements exceeds the {_LONGEST_AP_LIMIT}-element DP limit"
        )
    L = np.full((n, n), 2, dtype=np.int16)
    for j in range(2, n):
        # value needed before i so that (prev, A[i], A[j]) is a progression
        prev = 2 * A[:j] - A[j]
        h = np.searchsorted(A[:j], prev)
        hc = np.minimum(h, j - 1)
        ok = A[hc] == prev
        ii = np.nonzero(ok)[0]
        if ii.size:
            L[ii, j] = L[hc[ii], ii] + 1
    best = int(L.max())
    if best == 2:
        return 2, (int(A[0]), int(A[1] - A[0]))
    i_idx, j_idx = np.nonzero(L == best)
    diffs = A[j_idx] - A[i_idx]
    starts = A[j_idx] - (best - 1) * diffs
    pick = np.lexsort((diffs, starts))[0]
    return best, (int(starts[pick]), int(diffs[pick]))


def kfree_certificate(spec: KempnerSpec, k: int) -> bool:
    """Sufficient test that K(S, b) and all its shifts are k-free.

    True iff 0 is a digit and S is k-free mod b.  False does not imply a
    progression exists: digit sets with gaps can defeat carrying and stay
    k-free anyway (e.g. digits {0, 2, 5} in base 7 with k = 3).
    """
    if spec.digits.b < 3:
        raise ValueError("certificate requires base >= 3")
    return 0 in spec.digits.members and is_kfree_mod(spec.digits, k)


def approximate_by_kempner(values, k: int) -> KempnerSpec:
    """Shifted Kempner set whose harmonic sum dominates that of a finite set.

    For a finite k-free set S of positive integers, the digit set
    S - min(S) in base max(k, 2*max(S)) + 1 is k-free mod b with 0 as a
    digit, so the certificate holds; the shifted set K + 1 contains each
    member of S translated by 1 - min(S) <= 0, hence term by term no
    smaller a reciprocal.
    """
    vals = sorted(set(values))
    if not vals:
        raise ValueError("set must be non-empty")
    if vals[0] < 1:
        raise ValueError("set members must be positive integers")
    witness = find_integer_ap(vals, k)
    if witness is not None:
        raise NotKFreeError(
            f"set contains a {k}-term progression starting at {witness[0]} "
            f"with difference {witness[1]}",
            witness=witness,
        )
    lo = vals[0]
    b = max(k, 2 * vals[-1]) + 1
    digits = ResidueSet(b, tuple(v - lo for v in vals))
    return KempnerSpec(digits=digits, shift=1)


def greedy_set(k: int, n_terms: int) -> list[int]:
    """First n_terms of the lexicographically earliest k-free set.

    Scans n = 1, 2, ... and keeps n whenever no k-term progression ends
    at it; progressions ending earlier were excluded inductively.  The
    membership tests run on scaled bitsets: with bit s*x marking member
    x at scale s, the terms n - j*d (j = 1..k-1) rewrite to j*x - (j-1)*n
    for x = n - d, so one AND per j over a common scale L = lcm(1..k-1)
    decides all differences d at once.
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if n_terms < 1:
        raise ValueError(f"need at least one term, got {n_terms}")
    L = math.lcm(*range(1, k))
    scales = {L} | {L // j for j in range(2, k)}
    spread = {s: 0 for s in scales}
    shifts = [(L // j, (L // j) * (j - 1)) for j in range(2, k)]
    out: list[int] = []
    n = 0
    while len(out) < n_terms:
        n += 1
        acc = spread[L]
        for scale, mult in shifts:
            if not acc:
                break
            acc &= spread[scale] << (mult * n)
        if acc:
            continue
        out.append(n)
        for s in scales:
            spread[s] |= 1 << (s * n)
    return out

"""Arithmetic-progression logic on residues mod b.

A residue set S inside [0, b-1] is an arithmetic progression mod b of
length k when some ordinary increasing k-term progression, with common
difference not divisible by b, reduces term by term into S.  Because
residues repeat, small sets can carry long progressions: {1, 3, 5} is an
arithmetic progression mod 6 of infinite length (1, 3, 5, 7, 9, ...
never leaves it).  S is called k-free mod b when it contains no k-term
progression mod b.

The decision procedure reduces to a finite window: the residues of
c + j*d depend only on c mod b and d mod b, so it suffices to scan
starts c in [0, b-1] and differences d in [1, b-1]; the k terms then
span fewer than k*b integers, i.e. the union of the k translates
S, S+b, ..., S+(k-1)b already witnesses every progression, and any
longer (or "infinite") progression contains a k-term one.

The search-facing helpers maintain states (S, T) where S is k-free
mod b and T holds the digits that can still extend it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "NotKFreeError",
    "ResidueSet",
    "APWitness",
    "SearchState",
    "is_kfree_mod",
    "find_ap_witness",
    "find_integer_ap",
    "candidate_extensions",
    "initial_state",
    "extend_state",
    "embedding_base",
]

# Pattern tables are O(b^2) masks; beyond this base the direct scan is used.
_TABLE_BASE_LIMIT = 1024


class NotKFreeError(ValueError):
    """A set that was required to avoid k-term progressions contains one."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class ResidueSet:
    """A base b >= 2 together with a strictly increasing tuple of residues."""

    b: int
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if self.b < 2:
            raise ValueError(f"base must be >= 2, got {self.b}")
        for m in self.members:
            if not isinstance(m, int):
                raise ValueError(f"residues must be integers, got {m!r}")
        if self.members:
            if self.members[0] < 0 or self.members[-1] >= self.b:
                raise ValueError(
                    f"residues must lie in [0, {self.b - 1}], got {self.members}"
                )
            for lo, hi in zip(self.members, self.members[1:]):
                if lo >= hi:
                    raise ValueError("residues must be strictly increasing")

    def __len__(self) -> int:
        return len(self.members)

    @property
    def mask(self) -> int:
        m = 0
        for d in self.members:
            m |= 1 << d
        return m


@dataclass(frozen=True)
class APWitness:
    """A k-term progression mod b: start, common difference, term count."""

    start: int
    diff: int
    length: int

    def residues(self, b: int) -> tuple[int, ...]:
        return tuple((self.start + j * self.diff) % b for j in range(self.length))


def _validate_k(k: int) -> None:
    if not isinstance(k, int) or k < 3:
        raise ValueError(f"progression length k must be an integer >= 3, got {k}")


def find_ap_witness(S: ResidueSet, k: int) -> APWitness | None:
    """Smallest (diff, start) k-term progression mod b inside S, if any.

    The scan order makes the witness deterministic; the start is always
    a member of S since it is the first term of the progression.
    """
    _validate_k(k)
    b = S.b
    members = set(S.members)
    for diff in range(1, b):
        for c in S.members:
            x = c
            for _ in range(k - 1):
                x = (x + diff) % b
                if x not in members:
                    break
            else:
                return APWitness(start=c, diff=diff, length=k)
    return None


def is_kfree_mod(S: ResidueSet, k: int) -> bool:
    """True iff S contains no k-term arithmetic progression mod b."""
    return find_ap_witness(S, k) is None


def find_integer_ap(values, k: int) -> tuple[int, int] | None:
    """(start, diff) of some k-term progression in a finite integer set.

    Plain quadratic scan over ordered pairs taken as the first two terms;
    exact, meant for modest set sizes.
    """
    _validate_k(k)
    vals = sorted(set(values))
    have = set(vals)
    n = len(vals)
    for i in range(n):
        for j in range(i + 1, n):
            d = vals[j] - vals[i]
            x = vals[j]
            length = 2
            while length < k and x + d in have:
                x += d
                length += 1
            if length >= k:
                return vals[i], d
    return None


def embedding_base(values, k: int) -> int:
    """Least base bound 2*max(S)+1 under which S stays k-free mod b.

    For a k-free integer set S contained in [0, M], every base b > 2M
    keeps S k-free mod b; the returned value is the smallest such b.
    Minimality of the *admissible* base is not attempted: smaller bases
    may work and can be probed with is_kfree_mod directly.
    """
    _validate_k(k)
    vals = sorted(set(values))
    if vals and vals[0] < 0:
        raise ValueError("set members must be non-negative")
    witness = find_integer_ap(vals, k)
    if witness is not None:
        raise NotKFreeError(
            f"set contains a {k}-term progression starting at {witness[0]} "
            f"with difference {witness[1]}",
            witness=witness,
        )
    if not vals:
        return 1
    return 2 * vals[-1] + 1


# ---------------------------------------------------------------------------
# Search states (S, T)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchState:
    """A search node (S, T): digit set S and the viable extensions above it."""

    k: int
    digits: ResidueSet
    candidates: tuple[int, ...]


@dataclass(frozen=True)
class _APTable:
    """All distinct k-term progression residue sets mod b, as bitmasks.

    by_digit[d] holds each pattern containing d, with d's bit cleared;
    by_pair[(t, u)] holds each pattern containing both t and u, with both
    bits cleared.  The reduced masks make subset tests one AND each.
    """

    patterns: tuple[int, ...]
    by_digit: tuple[tuple[int, ...], ...]
    by_pair: dict[tuple[int, int], tuple[int, ...]]


@lru_cache(maxsize=64)
def _ap_table(b: int, k: int) -> _APTable:
    patterns = set()
    for diff in range(1, b):
        for c in range(b):
            m = 0
            x = c
            for _ in range(k):
                m |= 1 << x
                x = (x + diff) % b
            patterns.add(m)
    by_digit: list[list[int]] = [[] for _ in range(b)]
    by_pair: dict[tuple[int, int], list[int]] = {}
    for p in patterns:
        bits = [d for d in range(b) if p >> d & 1]
        for d in bits:
            by_digit[d].append(p & ~(1 << d))
        for ai, t in enumerate(bits):
            for u in bits[ai + 1 :]:
                by_pair.setdefault((t, u), []).append(p & ~(1 << t) & ~(1 << u))
    return _APTable(
        patterns=tuple(patterns),
        by_digit=tuple(tuple(v) for v in by_digit),
        by_pair={key: tuple(v) for key, v in by_pair.items()},
    )


def candidate_extensions(S: ResidueSet, k: int) -> tuple[int, ...]:
    """The extension set T: digits t <= b-2 above max(S) keeping S k-free.

    This is the from-scratch definition; extend_state must agree with it.
    """
    _validate_k(k)
    b = S.b
    start = S.members[-1] + 1 if S.members else 0
    out = []
    for t in range(start, b - 1):
        if is_kfree_mod(ResidueSet(b, S.members + (t,)), k):
            out.append(t)
    return tuple(out)


def initial_state(b: int, k: int, require_zero: bool = True) -> SearchState:
    """Root state: S = {0} (or empty) with its full extension set."""
    _validate_k(k)
    digits = ResidueSet(b, (0,) if require_zero else ())
    return SearchState(k=k, digits=digits, candidates=candidate_extensions(digits, k))


def state_from_digits(b: int, k: int, digits) -> SearchState:
    """Rebuild the (S, T) pair for an explicit digit set."""
    S = ResidueSet(b, tuple(sorted(digits)))
    witness = find_ap_witness(S, k)
    if witness is not None:
        raise NotKFreeError(
            f"digit set {S.members} is not {k}-free mod {b}", witness=witness
        )
    return SearchState(k=k, digits=S, candidates=candidate_extensions(S, k))


def extend_state(state: SearchState, t: int) -> SearchState:
    """Adjoin t from T, keeping exactly the candidates still viable above t.

    Only progressions through both t and a surviving candidate need
    rechecking: S was k-free and every u in T already had S + {u} k-free,
    so a new progression in S + {t, u} must use t and u together.  The
    result equals recomputing T from scratch for S + {t}.
    """
    if t not in state.candidates:
        raise ValueError(f"digit {t} is not a viable extension of {state.digits.members}")
    S = state.digits
    b = S.b
    new_digits = ResidueSet(b, S.members + (t,))
    mask = new_digits.mask
    kept = []
    if b <= _TABLE_BASE_LIMIT:
        by_pair = _ap_table(b, state.k).by_pair
        for u in state.candidates:
            if u <= t:
                continue
            not_mask = ~(mask | 1 << u)
            for p in by_pair.get((t, u), ()):
                if p & not_mask == 0:
                    break
            else:
                kept.append(u)
    else:
        for u in state.candidates:
            if u > t and is_kfree_mod(ResidueSet(b, new_digits.members + (u,)), state.k):
                kept.append(u)
    return SearchState(k=state.k, digits=new_digits, candidates=tuple(kept))

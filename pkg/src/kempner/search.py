"""Branch-and-bound depth-first search over k-free digit sets mod b.

States are pairs (S, T): S a digit set that is k-free mod b, T the
digits above max(S) in [0, b-2] that keep it k-free when adjoined.  The
first-order harmonic estimate of S together with its whole extension set
bounds every branch rooted at (S, T); branches whose bound falls below
the threshold are pruned.  Leaves (sets with no viable in-space
extension anywhere in [0, b-2]) whose own estimate clears the threshold
are emitted, in canonical (b, digits) order, exactly once.

Constrained modes shrink the explored space: a fixed root branch,
bounded deviation from the greedy reference set, or per-index caps on
the digits.  A density objective replaces the estimate bound with the
logarithmic density of S union T and keeps only strict improvements.

Runs are deterministic for any worker count, and long sweeps can
checkpoint completed work units and resume to bit-identical output.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import sys
from bisect import bisect_left, bisect_right
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, replace
from math import fsum, log
from typing import Iterator

from .harmonic import (
    CertifiedSum,
    PrecisionConfig,
    PrecisionError,
    harmonic_sum_shifted,
    quick_estimate,
)
from .progressions import (
    ResidueSet,
    _TABLE_BASE_LIMIT,
    _ap_table,
    candidate_extensions,
    is_kfree_mod,
)

__all__ = [
    "SearchConfig",
    "CandidateRecord",
    "SearchBudgetExceeded",
    "branch_and_bound",
    "density_search",
    "run_search",
    "rescore",
    "greedy_reference",
    "checkpoint_meta",
    "CHECKPOINT_VERSION",
]

MODES = ("full", "root", "greedy-dev", "caps")
OBJECTIVES = ("hsum", "density")

CHECKPOINT_VERSION = 1


class SearchBudgetExceeded(RuntimeError):
    """The state-count budget ran out before the sweep finished."""


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one search sweep.

    threshold prunes branches whose bound (harmonic estimate, or
    logarithmic density under the density objective) falls below it;
    -inf disables pruning.  mode picks the search space: "full",
    "root" (explore above root_prefix only), "greedy-dev" (at most
    deviation_budget skips of the greedy reference), or "caps"
    (per-index upper bounds on the digits).
    """

    k: int
    bases: tuple[int, int]
    threshold: float
    mode: str = "full"
    root_prefix: tuple[int, ...] | None = None
    deviation_budget: int | None = None
    caps: tuple[int, ...] | None = None
    objective: str = "hsum"
    require_zero: bool = True
    emit_top: int | None = None
    node_budget: int = 1_000_000_000

    def __post_init__(self):
        if self.k < 3:
            raise ValueError(f"k must be >= 3, got {self.k}")
        object.__setattr__(self, "bases", tuple(self.bases))
        lo, hi = self.bases
        if not (3 <= lo <= hi <= 10**6):
            raise ValueError(f"bases must satisfy 3 <= lo <= hi <= 1e6, got {lo}..{hi}")
        if math.isnan(self.threshold):
            raise ValueError("threshold must not be NaN")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.objective not in OBJECTIVES:
            raise ValueError(
                f"objective must be one of {OBJECTIVES}, got {self.objective!r}"
            )
        if self.mode == "root":
            if not self.root_prefix:
                raise ValueError("root mode needs a non-empty root_prefix")
            prefix = tuple(sorted(self.root_prefix))
            object.__setattr__(self, "root_prefix", prefix)
            if self.require_zero and prefix[0] != 0:
                raise ValueError("root_prefix must contain 0 when require_zero is set")
        if self.mode == "greedy-dev":
            if self.deviation_budget is None or self.deviation_budget < 0:
                raise ValueError("greedy-dev mode needs deviation_budget >= 0")
        if self.mode == "caps":
            if not self.caps:
                raise ValueError("caps mode needs a non-empty caps tuple")
            caps = tuple(self.caps)
            object.__setattr__(self, "caps", caps)
            for lo_c, hi_c in zip(caps, caps[1:]):
                if lo_c >= hi_c:
                    raise ValueError("caps must be strictly increasing")
        if self.node_budget < 1:
            raise ValueError("node_budget must be positive")
        if self.emit_top is not None and self.emit_top < 1:
            raise ValueError("emit_top must be positive when given")


@dataclass(frozen=True)
class CandidateRecord:
    """A surviving digit set with its scores; certified sum attached by rescore."""

    k: int
    b: int
    digits: tuple[int, ...]
    estimate: float
    density: float
    certified: CertifiedSum | None = None


def greedy_reference(b: int, k: int) -> tuple[int, ...]:
    """Greedy k-free-mod-b set: scan 0..b-2, keep digits that stay k-free."""
    members: tuple[int, ...] = ()
    for d in range(b - 1):
        trial = members + (d,)
        if is_kfree_mod(ResidueSet(b, trial), k):
            members = trial
    return members


def _root_digits(cfg: SearchConfig, b: int) -> tuple[int, ...] | None:
    """Root digit set for one base; None when the base cannot host it."""
    if cfg.mode == "root":
        prefix = cfg.root_prefix
        if prefix[-1] > b - 2:
            return None
        if not is_kfree_mod(ResidueSet(b, prefix), cfg.k):
            return None
        return prefix
    return (0,) if cfg.require_zero else ()


def _ref_skips(ref: tuple[int, ...], digits: tuple[int, ...]) -> int:
    """Reference elements <= max(digits) that the set skipped."""
    if not digits:
        return 0
    upto = bisect_right(ref, digits[-1])
    present = set(digits)
    return sum(1 for r in ref[:upto] if r not in present)


def _unit_records(cfg: SearchConfig, b: int, slot: int) -> list[dict]:
    """All emissions of one work unit: slot -1 is the root itself, any
    other slot the subtree entered through that first extension."""
    k = cfg.k
    root = _root_digits(cfg, b)
    if root is None:
        return []
    root_set = ResidueSet(b, root)
    cands0 = candidate_extensions(root_set, k)
    table = _ap_table(b, k)
    by_pair = table.by_pair
    by_digit = table.by_digit
    recip = [1.0 / (d + 1) for d in range(b)]
    thr = cfg.threshold
    density_mode = cfg.objective == "density"
    logb = log(b)
    caps = cfg.caps
    ref = greedy_reference(b, k) if cfg.mode == "greedy-dev" else ()
    budget = cfg.node_budget
    nodes = 0
    incumbent = 0
    out: list[dict] = []

    sys.setrecursionlimit(max(sys.getrecursionlimit(), b + 100))

    def branch_ok(count: int, sums: float) -> bool:
        if density_mode:
            return count > incumbent and (count > 0 and log(count) / logb >= thr)
        return sums / (1.0 - count / b) >= thr

    def t_allowed(digits: tuple[int, ...], t: int, skips: int) -> tuple[bool, int]:
        if caps is not None:
            i = len(digits)
            if i < len(caps) and t > caps[i]:
                return False, skips
        elif ref:
            last = digits[-1] if digits else -1
            gap = bisect_left(ref, t) - bisect_right(ref, last)
            if skips + gap > cfg.deviation_budget:
                return False, skips
            return True, skips + gap
        return True, skips

    def u_allowed(digits: tuple[int, ...], u: int, skips: int) -> bool:
        # whether inserting u below max(digits) stays inside the mode's space
        if caps is None:
            return True
        p = bisect_left(digits, u)
        if p < len(caps) and u > caps[p]:
            return False
        for q in range(p, len(digits)):
            if q + 1 < len(caps) and digits[q] > caps[q + 1]:
                return False
        return True

    def maximal(digits: tuple[int, ...], mask: int, skips: int) -> bool:
        last = digits[-1] if digits else -1
        for u in range(b - 1):
            if mask >> u & 1:
                continue
            if u > last:
                allowed, _ = t_allowed(digits, u, skips)
            else:
                allowed = u_allowed(digits, u, skips)
            if not allowed:
                continue
            not_mask = ~(mask | 1 << u)
            for p in by_digit[u]:
                if p & not_mask == 0:
                    break
            else:
                return False
        return True

    def leaf(digits: tuple[int, ...], mask: int, ssum: float, skips: int):
        nonlocal incumbent
        if density_mode:
            if len(digits) <= incumbent or not digits:
                return
            if log(len(digits)) / logb < thr:
                return
        elif ssum / (1.0 - len(digits) / b) < thr:
            return
        if not maximal(digits, mask, skips):
            return
        rs = ResidueSet(b, digits)
        out.append(
            {
                "k": k,
                "b": b,
                "digits": list(digits),
                "estimate": quick_estimate(rs),
                "density": log(len(digits)) / logb,
            }
        )
        if density_mode:
            incumbent = len(digits)

    def visit(
        digits: tuple[int, ...],
        mask: int,
        cands: tuple[int, ...],
        ssum: float,
        tsum: float,
        skips: int,
    ):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(
                f"node budget {budget} exhausted at base {b}; rerun with a "
                "constrained mode (root/greedy-dev/caps) or a higher threshold"
            )
        if not branch_ok(len(digits) + len(cands), ssum + tsum):
            return
        entered = False
        for pos, t in enumerate(cands):
            allowed, t_skips = t_allowed(digits, t, skips)
            if not allowed:
                continue
            entered = True
            new_mask = mask | 1 << t
            kept = []
            ksum = 0.0
            for u in cands[pos + 1 :]:
                not_mask = ~(new_mask | 1 << u)
                for p in by_pair.get((t, u), ()):
                    if p & not_mask == 0:
                        break
                else:
                    kept.append(u)
                    ksum += recip[u]
            visit(
                digits + (t,), new_mask, tuple(kept), ssum + recip[t], ksum, t_skips
            )
        if not entered:
            leaf(digits, mask, ssum, skips)

    mask0 = root_set.mask
    ssum0 = fsum(recip[d] for d in root)
    tsum0 = fsum(recip[u] for u in cands0)
    skips0 = _ref_skips(ref, root) if ref else 0
    if not branch_ok(len(root) + len(cands0), ssum0 + tsum0):
        return []
    if slot == -1:
        if not any(t_allowed(root, t, skips0)[0] for t in cands0):
            leaf(root, mask0, ssum0, skips0)
        return out
    if slot not in cands0:
        return []
    allowed, skips1 = t_allowed(root, slot, skips0)
    if not allowed:
        return []
    pos = cands0.index(slot)
    new_mask = mask0 | 1 << slot
    kept = []
    ksum = 0.0
    for u in cands0[pos + 1 :]:
        not_mask = ~(new_mask | 1 << u)
        for p in by_pair.get((slot, u), ()):
            if p & not_mask == 0:
                break
        else:
            kept.append(u)
            ksum += recip[u]
    visit(root + (slot,), new_mask, tuple(kept), ssum0 + recip[slot], ksum, skips1)
    return out


# ---------------------------------------------------------------------------
# Coordination, checkpointing, determinism
# ---------------------------------------------------------------------------


def _config_digest(cfg: SearchConfig) -> str:
    payload = {
        "k": cfg.k,
        "bases": list(cfg.bases),
        "threshold": repr(cfg.threshold),
        "mode": cfg.mode,
        "root_prefix": list(cfg.root_prefix) if cfg.root_prefix else None,
        "deviation_budget": cfg.deviation_budget,
        "caps": list(cfg.caps) if cfg.caps else None,
        "objective": cfg.objective,
        "require_zero": cfg.require_zero,
        "node_budget": cfg.node_budget,
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _load_checkpoint(path: str, digest: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("checkpoint_version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version in {path}")
    if data.get("digest") != digest:
        raise ValueError(
            f"checkpoint {path} was written for a different search configuration"
        )
    return data


def _write_checkpoint(path: str, data: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def checkpoint_meta(path: str) -> dict:
    """Caller-supplied metadata stored in a checkpoint file."""
    with open(path, encoding="utf-8") as fh:
        return json.load(fh).get("meta", {})


def _units(cfg: SearchConfig) -> list[tuple[int, int]]:
    units: list[tuple[int, int]] = []
    for b in range(cfg.bases[0], cfg.bases[1] + 1):
        root = _root_digits(cfg, b)
        if root is None:
            continue
        units.append((b, -1))
        units.extend((b, t) for t in candidate_extensions(ResidueSet(b, root), cfg.k))
    return units


def run_search(
    cfg: SearchConfig,
    workers: int = 1,
    checkpoint: str | None = None,
    resume: bool = False,
    meta: dict | None = None,
) -> Iterator[CandidateRecord]:
    """Stream CandidateRecords in canonical (b, digits) order.

    Identical output for any worker count.  With a checkpoint path,
    completed work units are persisted after each unit and a resumed run
    reproduces the remaining stream bit-identically.
    """
    if cfg.bases[1] > _TABLE_BASE_LIMIT:
        raise ValueError(
            f"search supports bases up to {_TABLE_BASE_LIMIT}; use is_kfree_mod "
            "and rescore directly for larger moduli"
        )
    digest = _config_digest(cfg)
    state: dict = {
        "checkpoint_version": CHECKPOINT_VERSION,
        "digest": digest,
        "meta": meta or {},
        "units": {},
    }
    if checkpoint and resume and os.path.exists(checkpoint):
        state = _load_checkpoint(checkpoint, digest)
    done: dict[str, list[dict]] = state["units"]

    units = _units(cfg)
    best = 0  # density objective: strictly improving sizes across the stream

    def release(rows: list[dict]) -> Iterator[CandidateRecord]:
        nonlocal best
        for row in rows:
            if cfg.objective == "density":
                if len(row["digits"]) <= best:
                    continue
                best = len(row["digits"])
            yield CandidateRecord(
                k=row["k"],
                b=row["b"],
                digits=tuple(row["digits"]),
                estimate=row["estimate"],
                density=row["density"],
            )

    pending = [u for u in units if f"{u[0]}:{u[1]}" not in done]
    if workers <= 1 or not pending:
        for b, slot in units:
            key = f"{b}:{slot}"
            if key not in done:
                done[key] = _unit_records(cfg, b, slot)
                if checkpoint:
                    _write_checkpoint(checkpoint, state)
            yield from release(done[key])
        return

    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_unit_records, cfg, b, slot): (b, slot) for b, slot in pending
        }
        released = 0
        ordered = list(units)
        for fut in as_completed(futures):
            b, slot = futures[fut]
            done[f"{b}:{slot}"] = fut.result()
            if checkpoint:
                _write_checkpoint(checkpoint, state)
            while released < len(ordered):
                key = f"{ordered[released][0]}:{ordered[released][1]}"
                if key not in done:
                    break
                yield from release(done[key])
                released += 1
        while released < len(ordered):
            key = f"{ordered[released][0]}:{ordered[released][1]}"
            yield from release(done[key])
            released += 1


def branch_and_bound(cfg: SearchConfig, **kwargs) -> Iterator[CandidateRecord]:
    """Harmonic-estimate search; see run_search for determinism guarantees."""
    if cfg.objective != "hsum":
        raise ValueError("branch_and_bound runs the hsum objective")
    return run_search(cfg, **kwargs)


def density_search(cfg: SearchConfig, **kwargs) -> Iterator[CandidateRecord]:
    """Logarithmic-density search: streams strict improvements only."""
    if cfg.objective != "density":
        raise ValueError("density_search needs cfg.objective == 'density'")
    return run_search(cfg, **kwargs)


def rescore(
    records, cfg: PrecisionConfig | None = None
) -> list[CandidateRecord]:
    """Attach certified shifted harmonic sums and rank by them, descending.

    Per-record precision failures leave certified as None (ranked last)
    instead of aborting the batch.
    """
    out: list[CandidateRecord] = []
    for rec in records:
        try:
            cert = harmonic_sum_shifted(ResidueSet(rec.b, rec.digits), 1, cfg)
        except PrecisionError:
            cert = None
        out.append(replace(rec, certified=cert))
    out.sort(
        key=lambda r: (
            r.certified is None,
            -(r.certified.value if r.certified else 0.0),
            r.b,
            r.digits,
        )
    )
    return out

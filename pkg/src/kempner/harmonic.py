"""Certified harmonic sums of shifted Kempner sets.

Members of K(S, b) are grouped by digit count: stratum 1 is S without 0,
and b*x + d steps stratum i to stratum i+1 for each digit d.  The power
sums T_i(j) = sum over stratum i of x**(-j) obey a binomial recursion
obtained from expanding (b*x + d)**(-j) around (b*x)**(-j); truncating
the expansion at total order J leaves a tail controlled rigorously by
d/(b*x) <= (b-1)/b**i on stratum i.  The harmonic sum of the shifted set
then follows from the alternating series

    1/(x + n) = sum_{m >= 1} (-n)**(m-1) * x**(-m),

valid on strata deep enough that x >= b**D > n.  Shallow strata are
summed by explicit enumeration; deep strata stop once the geometric
bound T_i(1) * r/(1-r) with r = |S|/b absorbs the remaining budget.
Every reported value carries a certified absolute-error bound combining
the binomial truncations, the shift-series truncations, the dropped
depth tail, and a floating-point roundoff allowance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, fsum

import numpy as np

from .progressions import ResidueSet

__all__ = [
    "PrecisionConfig",
    "CertifiedSum",
    "PowerSums",
    "PrecisionError",
    "depth_power_sums",
    "harmonic_sum_shifted",
    "quick_estimate",
    "shift_sum_decomposition",
    "ShiftDecomposition",
    "harmonic_number",
]

# Covers accumulated double-precision roundoff; scaled by (1 + |value|).
_FP_MARGIN = 1e-12

# Refuse to enumerate shallow strata past this many members.
_ENUM_LIMIT = 5_000_000


@dataclass(frozen=True)
class PrecisionConfig:
    """Accuracy controls for certified sums.

    target_abs_error: required bound on |reported value - true sum|.
    series_order: number of power sums carried per stratum (J).
    direct_depth: strata up to this digit count are enumerated outright.
    max_depth: hard cap on the stratum recursion.
    """

    target_abs_error: float = 1e-9
    series_order: int = 24
    direct_depth: int = 2
    max_depth: int = 100_000

    def __post_init__(self):
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")
        if self.series_order < 2:
            raise ValueError("series_order must be >= 2")
        if self.direct_depth < 2:
            raise ValueError("direct_depth must be >= 2")
        if self.max_depth < self.direct_depth:
            raise ValueError("max_depth must be >= direct_depth")


@dataclass(frozen=True)
class CertifiedSum:
    """A value together with a rigorous absolute-error bound."""

    value: float
    error_bound: float
    config: PrecisionConfig

    @property
    def interval(self) -> tuple[float, float]:
        return self.value - self.error_bound, self.value + self.error_bound


@dataclass(frozen=True)
class PowerSums:
    """T_depth(j) for j = 1..order, with per-entry error bounds."""

    depth: int
    values: tuple[float, ...]
    errors: tuple[float, ...]


class PrecisionError(RuntimeError):
    """The requested accuracy could not be certified; carries the best attempt."""

    def __init__(self, message: str, best: CertifiedSum):
        super().__init__(message)
        self.best = best


def harmonic_number(n: int) -> float:
    """H_n = 1 + 1/2 + ... + 1/n (H_0 = 0)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return fsum(1.0 / j for j in range(1, n + 1))


def quick_estimate(S: ResidueSet) -> float:
    """First-order model of the shifted harmonic sum, (1/(1-|S|/b)) * sum 1/(s+1).

    A heuristic fitness score for search pruning, not a bound of
    certified sign.
    """
    if len(S) >= S.b:
        raise ValueError("digit set must be a proper subset of [0, b-1]")
    scale = 1.0 / (1.0 - len(S) / S.b)
    return scale * fsum(1.0 / (s + 1) for s in S.members)


# ---------------------------------------------------------------------------
# Strata and power sums
# ---------------------------------------------------------------------------


def _stratum(S: ResidueSet, depth: int) -> np.ndarray:
    """Members of K(S, b) with exactly `depth` digits, ascending, exact."""
    digits = np.asarray(S.members, dtype=np.int64)
    cur = digits[digits > 0]
    for _ in range(depth - 1):
        if cur.size * digits.size > _ENUM_LIMIT:
            raise ValueError(f"stratum {depth} is too large to enumerate")
        cur = (cur[:, None] * S.b + digits[None, :]).reshape(-1)
    return cur


def _power_sums_exact(stratum: np.ndarray, order: int) -> tuple[list[float], list[float]]:
    """T(j) = sum x**(-j) for j = 1..order by direct summation."""
    values = [0.0] * (order + 1)
    errors = [0.0] * (order + 1)
    if stratum.size:
        y = 1.0 / stratum.astype(np.float64)
        acc = y.copy()
        slack = (stratum.size + 4) * 2.3e-16
        for j in range(1, order + 1):
            values[j] = float(acc.sum())
            errors[j] = slack * values[j]
            acc *= y
    return values, errors


def _binom_tail(j: int, trunc: int, t: float) -> float:
    """Rigorous upper bound on sum_{m > trunc} C(j+m-1, m) t**m, 0 <= t < 1.

    Term ratios t*(j+m)/(m+1) decrease towards t, so the series is summed
    explicitly until the ratio drops below 0.9 and bounded geometrically
    from there.
    """
    if t <= 0.0:
        return 0.0
    if t >= 0.9:
        raise ValueError(f"expansion ratio {t} too large for a tail bound")
    m = trunc + 1
    a = comb(j + m - 1, m) * t**m
    total = 0.0
    while True:
        ratio = t * (j + m) / (m + 1)
        if ratio < 0.9:
            return total + a / (1.0 - ratio)
        total += a
        a *= ratio
        m += 1


def _recursion_step(
    values: list[float],
    errors: list[float],
    depth: int,
    S: ResidueSet,
    order: int,
    beta: list[float],
    binom: list[list[int]],
    bpow: list[float],
) -> tuple[list[float], list[float]]:
    """Step the power sums from stratum depth-1 to stratum depth.

    T_i(j) = sum_m (-1)**m C(j+m-1, m) beta_m b**-(j+m) T_{i-1}(j+m),
    truncated at m = order - j, plus a certified truncation bound using
    d/(b*x) <= (b-1) * b**(1-depth) on the source stratum.
    """
    size = len(S)
    q = (S.b - 1.0) * S.b ** (1.0 - depth)
    out_v = [0.0] * (order + 1)
    out_e = [0.0] * (order + 1)
    for j in range(1, order + 1):
        trunc = order - j
        terms = []
        errs = []
        for m in range(trunc + 1):
            coef = binom[j][m] * beta[m] * bpow[j + m]
            terms.append(coef * values[j + m] if m % 2 == 0 else -coef * values[j + m])
            errs.append(coef * errors[j + m])
        source = max(values[j], 0.0) + errors[j]
        tail = size * bpow[j] * source * _binom_tail(j, trunc, q)
        out_v[j] = fsum(terms)
        out_e[j] = fsum(errs) + tail
    return out_v, out_e


def depth_power_sums(
    S: ResidueSet, depth: int, order: int, direct_depth: int = 2
) -> PowerSums:
    """Power sums T_depth(j), j = 1..order, with certified error bounds.

    Strata up to direct_depth are enumerated and summed exactly (up to
    roundoff); deeper strata are reached through the binomial recursion,
    each step contributing its rigorous truncation bound.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if order < 2:
        raise ValueError(f"order must be >= 2, got {order}")
    start = min(depth, max(direct_depth, 1))
    values, errors = _power_sums_exact(_stratum(S, start), order)
    if depth > start:
        beta = [float(sum(d**m for d in S.members)) for m in range(order)]
        binom = [[0] * (order + 1)] + [
        [comb(j + m - 1, m) for m in range(order + 1)] for j in range(1, order + 1)
    ]
        bpow = [float(S.b) ** -p for p in range(2 * order + 1)]
        for i in range(start + 1, depth + 1):
            values, errors = _recursion_step(
                values, errors, i, S, order, beta, binom, bpow
            )
    return PowerSums(
        depth=depth, values=tuple(values[1:]), errors=tuple(errors[1:])
    )


# ---------------------------------------------------------------------------
# Certified series over the positive members
# ---------------------------------------------------------------------------


def _series_coeffs(kind: str, n: int, order: int) -> list[float]:
    """Signed coefficients c_m of sum_m c_m T(m); |c_m| <= n**(m-1)."""
    if kind == "shift":
        # 1/(x+n) = sum (-n)**(m-1) x**-m  (n = 0 collapses to m = 1)
        if n == 0:
            return [0.0, 1.0] + [0.0] * (order - 1)
        return [0.0] + [float((-n) ** (m - 1)) for m in range(1, order + 1)]
    if kind == "complement":
        # 1/x - 1/(x+n) = sum_{m >= 2} (-1)**m n**(m-1) x**-m
        return [0.0, 0.0] + [
            float((-1) ** m * n ** (m - 1)) for m in range(2, order + 1)
        ]
    raise ValueError(f"unknown series kind {kind!r}")


def _direct_term(kind: str, n: int, x: np.ndarray) -> np.ndarray:
    xf = x.astype(np.float64)
    if kind == "shift":
        return 1.0 / (xf + n)
    return n / (xf * (xf + n))


def _certified_series(
    S: ResidueSet, n: int, cfg: PrecisionConfig, kind: str
) -> CertifiedSum:
    """Certified sum over the *positive* members of K(S, b).

    kind="shift" sums 1/(x+n); kind="complement" sums n/(x*(x+n)).
    """
    b = S.b
    eps = cfg.target_abs_error
    order = cfg.series_order
    if not any(d > 0 for d in S.members):
        return CertifiedSum(0.0, 0.0, cfg)

    # the shift series needs x >= b**depth > n, and the amplified
    # expansion parameter n*(b-1)/b**depth must stay small or the
    # order-J truncation floor (carrying n**(m-1) factors) swamps eps
    depth = cfg.direct_depth
    while n >= 1 and 6 * n * (b - 1) > b**depth:
        depth += 1
        if len(S) ** depth > _ENUM_LIMIT:
            raise ValueError(f"shift {n} is too large relative to base {b}")

    value = 0.0
    for i in range(1, depth + 1):
        value += fsum(_direct_term(kind, n, _stratum(S, i)).tolist())

    values, errors = _power_sums_exact(_stratum(S, depth), order)
    coeffs = _series_coeffs(kind, n, order)
    beta = [float(sum(d**m for d in S.members)) for m in range(order)]
    binom = [[0] * (order + 1)] + [
        [comb(j + m - 1, m) for m in range(order + 1)] for j in range(1, order + 1)
    ]
    bpow = [float(b) ** -p for p in range(2 * order + 1)]
    ratio = len(S) / b
    geom = ratio / (1.0 - ratio)

    err = 0.0
    i = depth
    while True:
        depth_tail = (max(values[1], 0.0) + errors[1]) * geom
        slop = _FP_MARGIN * (1.0 + abs(value))
        bound = err + depth_tail + slop
        if bound <= eps:
            return CertifiedSum(value, bound, cfg)
        if err + slop > eps and depth_tail <= err + slop:
            # the removable tail no longer dominates: the floor is reached
            raise PrecisionError(
                f"series truncation floor {err + slop:.3e} exceeds target {eps:.3e}; "
                "raise series_order or target_abs_error",
                best=CertifiedSum(value, bound, cfg),
            )
        if i >= cfg.max_depth:
            raise PrecisionError(
                f"depth {i} reached with bound {bound:.3e} above target {eps:.3e}",
                best=CertifiedSum(value, bound, cfg),
            )
        i += 1
        values, errors = _recursion_step(
            values, errors, i, S, order, beta, binom, bpow
        )
        phi = float(b) ** (1.0 - i)
        contrib = fsum(coeffs[m] * values[m] for m in range(1, order + 1))
        prop = fsum(abs(coeffs[m]) * errors[m] for m in range(1, order + 1))
        series_tail = 0.0
        if n > 0:
            # sum_{m > order} n**(m-1) T(m) <= T(order) n**(order-1) (n*phi)/(1-n*phi)
            top = max(values[order], 0.0) + errors[order]
            series_tail = top * float(n) ** (order - 1) * (n * phi) / (1.0 - n * phi)
        value += contrib
        err += prop + series_tail


def harmonic_sum_shifted(
    S: ResidueSet, shift: int, cfg: PrecisionConfig | None = None
) -> CertifiedSum:
    """Certified sum of 1/(x + shift) over K(S, b).

    The member 0 contributes 1/shift when shift >= 1 and is excluded when
    shift = 0.  Raises PrecisionError (carrying the best attempt) when
    the target cannot be certified within the configured order and depth.
    """
    cfg = cfg or PrecisionConfig()
    if len(S) >= S.b:
        raise ValueError("digit set must be a proper subset of [0, b-1]: sum diverges")
    if shift < 0:
        raise ValueError(f"shift must be >= 0, got {shift}")
    zero_term = 1.0 / shift if (shift >= 1 and 0 in S.members) else 0.0
    try:
        core = _certified_series(S, shift, cfg, kind="shift")
    except PrecisionError as exc:
        best = exc.best
        raise PrecisionError(
            str(exc),
            best=CertifiedSum(best.value + zero_term, best.error_bound, cfg),
        ) from None
    return CertifiedSum(core.value + zero_term, core.error_bound, cfg)


@dataclass(frozen=True)
class ShiftDecomposition:
    """Both sides of the shift identity for the positive members P of K(S, b).

    lhs:        sum over P of 1/(s+n), certified.
    unshifted:  sum over P of 1/s, certified.
    complement: sum over P of n/(s(s+n)), certified; the complement sum
                over integers outside P equals H_n minus this.
    rhs = unshifted + (H_n - complement) - H_n, so the identity
    lhs = rhs must hold within the combined error bounds.
    """

    lhs: CertifiedSum
    unshifted: CertifiedSum
    complement: CertifiedSum
    harmonic_n: float

    @property
    def complement_outside(self) -> float:
        return self.harmonic_n - self.complement.value

    @property
    def rhs_value(self) -> float:
        return self.unshifted.value + self.complement_outside - self.harmonic_n

    @property
    def rhs_error_bound(self) -> float:
        return self.unshifted.error_bound + self.complement.error_bound

    @property
    def gap(self) -> float:
        return abs(self.lhs.value - self.rhs_value)


def shift_sum_decomposition(
    S: ResidueSet, n: int, cfg: PrecisionConfig | None = None
) -> ShiftDecomposition:
    """Evaluate the shift identity as three independently certified series.

    Each side is computed through a different alternating expansion, so
    agreement within the combined bounds is a genuine consistency check
    on the engine rather than an algebraic tautology.
    """
    cfg = cfg or PrecisionConfig()
    if n < 1:
        raise ValueError(f"shift n must be >= 1, got {n}")
    if len(S) >= S.b:
        raise ValueError("digit set must be a proper subset of [0, b-1]")
    return ShiftDecomposition(
        lhs=_certified_series(S, n, cfg, kind="shift"),
        unshifted=_certified_series(S, 0, cfg, kind="shift"),
        complement=_certified_series(S, n, cfg, kind="complement"),
        harmonic_n=harmonic_number(n),
    )

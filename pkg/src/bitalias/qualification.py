"""Two-sided qualification test on per-position counts.

A position qualifies when both one-sided nulls are rejected at half the
significance level each: "alias at or above the upper limit" via the lower
binomial tail, and "alias at or below the lower limit" via the upper tail.
Rejecting both keeps the false acceptance rate at or below alpha.  The module
also plans the device count needed to keep the false rejection rate in check,
and provides the early-abort forecast for partially completed campaigns.

No multiple-testing correction is applied across positions; every p-value and
verdict is per-position, and reports state that explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .confidence import PlanResult
from .errors import CapacityError, DomainError
from .response import PositionCounts
from .special import (_as_count, _as_probability, binomial_cdf,
                      binomial_range_mass, binomial_sf)

FRR_DEVICE_CAP = 10_000_000
_FRR_CERTIFY_WINDOW = 50  # scan below the search result; the FRR curve wiggles


@dataclass(frozen=True)
class AliasLimits:
    """Permissible alias band (p_l, p_u), both strictly inside (0, 1)."""

    p_l: float
    p_u: float

    def __post_init__(self):
        p_l = _as_probability(self.p_l, "p_l", open_interval=True)
        p_u = _as_probability(self.p_u, "p_u", open_interval=True)
        if not p_l < p_u:
            raise DomainError(f"limits must satisfy p_l < p_u, got ({p_l}, {p_u})")
        object.__setattr__(self, "p_l", p_l)
        object.__setattr__(self, "p_u", p_u)


@dataclass(frozen=True)
class AcceptanceRegion:
    """Count range [x_l, x_u] of observed 1s that qualifies a position.

    The region may be empty (both endpoints None): at small device counts no
    count can reject both nulls, which is the planner's signal that the
    campaign is too small, not an error.
    """

    devices: int
    limits: AliasLimits
    alpha: float
    x_l: int | None
    x_u: int | None

    def __post_init__(self):
        if (self.x_l is None) != (self.x_u is None):
            raise DomainError("x_l and x_u must be both set or both None")
        if self.x_l is not None and not 0 <= self.x_l <= self.x_u <= self.devices:
            raise DomainError(f"region [{self.x_l}, {self.x_u}] out of order for n={self.devices}")

    @property
    def is_empty(self) -> bool:
        return self.x_l is None

    def contains(self, x: int) -> bool:
        return not self.is_empty and self.x_l <= x <= self.x_u


@dataclass(frozen=True)
class TestVerdict:
    """Outcome of the two-sided qualification test at one position."""

    position: int
    ones: int
    p_value_upper: float
    p_value_lower: float
    alpha: float
    accepted: bool


@dataclass(frozen=True)
class EarlyStopAdvice:
    """Per-position forecast p-values with the resulting continue/abort call."""

    p_values_low: tuple[float, ...]
    p_values_high: tuple[float, ...]
    flagged_positions: tuple[int, ...]
    decision: str  # "continue" | "abort"


def _check_test_args(x, n, limits, alpha=None):
    x = _as_count(x, "x")
    n = _as_count(n, "n")
    if n < 1:
        raise DomainError("n must be >= 1")
    if x > n:
        raise DomainError(f"x must not exceed n, got x={x}, n={n}")
    if not isinstance(limits, AliasLimits):
        limits = AliasLimits(*limits)
    if alpha is not None:
        alpha = _as_probability(alpha, "alpha", open_interval=True)
        return x, n, limits, alpha
    return x, n, limits


def p_value_upper(x, n, p_u) -> float:
    """P[X <= x] under Binomial(n, p_u): evidence against alias >= p_u."""
    x = _as_count(x, "x")
    n = _as_count(n, "n")
    if x > n:
        raise DomainError(f"x must not exceed n, got x={x}, n={n}")
    p_u = _as_probability(p_u, "p_u", open_interval=True)
    return binomial_cdf(x, n, p_u)


def p_value_lower(x, n, p_l) -> float:
    """P[X >= x] under Binomial(n, p_l): evidence against alias <= p_l.

    Computed in the survival form, never as 1 - cdf.
    """
    x = _as_count(x, "x")
    n = _as_count(n, "n")
    if x > n:
        raise DomainError(f"x must not exceed n, got x={x}, n={n}")
    p_l = _as_probability(p_l, "p_l", open_interval=True)
    return binomial_sf(x, n, p_l)


def acceptance_region(n, limits: AliasLimits, alpha) -> AcceptanceRegion:
    """Largest count range whose members reject both one-sided nulls.

    x_u is the largest x with p_value_upper(x) < alpha/2 and x_l the smallest
    x with p_value_lower(x) < alpha/2; both searches ride the monotone tails.
    """
    n = _as_count(n, "n")
    if n < 1:
        raise DomainError("n must be >= 1")
    if not isinstance(limits, AliasLimits):
        limits = AliasLimits(*limits)
    alpha = _as_probability(alpha, "alpha", open_interval=True)
    half = 0.5 * alpha

    empty = AcceptanceRegion(devices=n, limits=limits, alpha=alpha, x_l=None, x_u=None)

    # Largest x with cdf(x; n, p_u) < alpha/2.  cdf is increasing in x and
    # cdf(n) = 1 >= alpha/2, so the qualifying set is a (possibly empty) prefix.
    if not binomial_cdf(0, n, limits.p_u) < half:
        return empty
    lo, hi = 0, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if binomial_cdf(mid, n, limits.p_u) < half:
            lo = mid
        else:
            hi = mid
    x_u = lo

    # Smallest x with sf(x; n, p_l) < alpha/2.  sf is decreasing in x and
    # sf(0) = 1 >= alpha/2, so the qualifying set is a (possibly empty) suffix.
    if not binomial_sf(n, n, limits.p_l) < half:
        return empty
    lo, hi = 0, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if binomial_sf(mid, n, limits.p_l) < half:
            hi = mid
        else:
            lo = mid
    x_l = hi

    if x_l > x_u:
        return empty
    return AcceptanceRegion(devices=n, limits=limits, alpha=alpha, x_l=x_l, x_u=x_u)


def test_position(x, n, limits: AliasLimits, alpha, position: int = 0) -> TestVerdict:
    """Two-sided qualification verdict for one position's count of 1s.

    Accepted exactly when both p-values fall strictly below alpha/2, which is
    equivalent to membership in the acceptance region for the same n.
    """
    x, n, limits, alpha = _check_test_args(x, n, limits, alpha)
    pu = p_value_upper(x, n, limits.p_u)
    pl = p_value_lower(x, n, limits.p_l)
    half = 0.5 * alpha
    return TestVerdict(position=position, ones=x, p_value_upper=pu, p_value_lower=pl,
                       alpha=alpha, accepted=pu < half and pl < half)


def acceptance_probability(n, p, region: AcceptanceRegion) -> float:
    """Chance that a position with true alias p lands inside the region.

    An empty region yields 0.0 by definition: no count can qualify.
    """
    n = _as_count(n, "n")
    p = _as_probability(p, "p")
    if region.devices != n:
        raise DomainError(f"region was built for n={region.devices}, not n={n}")
    if region.is_empty:
        return 0.0
    return binomial_range_mass(region.x_l, region.x_u, n, p)


def plan_devices_frr(limits: AliasLimits, inner: tuple[float, float],
                     alpha, beta) -> PlanResult:
    """Smallest device count keeping the false rejection rate at or below beta
    for every alias inside the inner band.

    By tail monotonicity it suffices to check the band's endpoints.  The
    binary-search result is certified by scanning a window of 50 counts below
    it, because the discrete FRR curve is not perfectly monotone in n.
    """
    if not isinstance(limits, AliasLimits):
        limits = AliasLimits(*limits)
    p_k, p_v = inner
    p_k = _as_probability(p_k, "p_k", open_interval=True)
    p_v = _as_probability(p_v, "p_v", open_interval=True)
    if not limits.p_l < p_k < p_v < limits.p_u:
        raise DomainError(
            f"inner band must satisfy p_l < p_k < p_v < p_u, got "
            f"({limits.p_l}, {p_k}, {p_v}, {limits.p_u})")
    alpha = _as_probability(alpha, "alpha", open_interval=True)
    beta = _as_probability(beta, "beta", open_interval=True)

    def frr_ok(n: int) -> bool:
        region = acceptance_region(n, limits, alpha)
        if region.is_empty:
            return False
        return all(1.0 - acceptance_probability(n, p, region) <= beta
                   for p in (p_k, p_v))

    lo, hi = 0, 1
    while not frr_ok(hi):
        lo = hi
        hi *= 2
        if hi > FRR_DEVICE_CAP:
            raise CapacityError(
                f"beta {beta} unreachable below {FRR_DEVICE_CAP} devices")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if frr_ok(mid):
            hi = mid
        else:
            lo = mid
    best = hi
    for m in range(max(1, hi - _FRR_CERTIFY_WINDOW), hi):
        if frr_ok(m):
            best = m
            break
    return PlanResult(devices=best, alpha=alpha, method="frr",
                      limits=limits, inner=(p_k, p_v), beta=beta)


def early_stop_p_values(x, n, limits: AliasLimits) -> tuple[float, float]:
    """Forecast p-values for a partial campaign.

    First element: P[X <= x] under Binomial(n, p_l), small when the count is
    already implausibly low for any in-range alias.  Second: the symmetric
    P[X >= x] under Binomial(n, p_u) for implausibly high counts.
    """
    x, n, limits = _check_test_args(x, n, limits)
    return (binomial_cdf(x, n, limits.p_l), binomial_sf(x, n, limits.p_u))


def early_stop_decision(counts: PositionCounts, limits: AliasLimits, alpha,
                        max_flag_fraction: float = 0.0) -> EarlyStopAdvice:
    """Flag positions whose counts already contradict the permissible band and
    abort once the flagged fraction exceeds the configured threshold.

    The default threshold 0 aborts on any flagged position.
    """
    if not isinstance(limits, AliasLimits):
        limits = AliasLimits(*limits)
    alpha = _as_probability(alpha, "alpha", open_interval=True)
    max_flag_fraction = _as_probability(max_flag_fraction, "max_flag_fraction")
    n = counts.devices
    lows: list[float] = []
    highs: list[float] = []
    flagged: list[int] = []
    for t, x in enumerate(counts.ones):
        p_low, p_high = early_stop_p_values(int(x), n, limits)
        lows.append(p_low)
        highs.append(p_high)
        if min(p_low, p_high) < alpha:
            flagged.append(t)
    fraction = len(flagged) / counts.positions
    return EarlyStopAdvice(p_values_low=tuple(lows), p_values_high=tuple(highs),
                           flagged_positions=tuple(flagged),
                           decision="abort" if fraction > max_flag_fraction else "continue")

"""Binomial-proportion confidence intervals, width curves, device planning.

Three estimators are provided.  The normal approximation is cheap but
degenerates near alias 0 or 1; Wilson's score interval keeps mean coverage
closest to nominal and is the reporting default; Clopper-Pearson guarantees
at least nominal coverage and underpins the qualification test.  Significance
is always split half per tail; there is no one-sided mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import CapacityError, DomainError
from .special import _as_count, _as_probability, beta_quantile, std_normal_quantile

if TYPE_CHECKING:  # pragma: no cover
    from .qualification import AliasLimits

METHODS = ("normal", "wilson", "clopper_pearson")

PLANNER_DEVICE_CAP = 10_000_000


def _check_alpha(alpha) -> float:
    return _as_probability(alpha, "alpha", open_interval=True)


def _check_x_n(x, n) -> tuple[int, int]:
    x = _as_count(x, "x")
    n = _as_count(n, "n")
    if n < 1:
        raise DomainError("n must be >= 1")
    if x > n:
        raise DomainError(f"x must not exceed n, got x={x}, n={n}")
    return x, n


def _z_for(alpha: float) -> float:
    return std_normal_quantile(1.0 - 0.5 * alpha)


@dataclass(frozen=True)
class Interval:
    """A two-sided confidence interval for a binomial proportion.

    ``analytic_width`` is the width before any clamping to [0, 1]; it differs
    from ``width`` only for the normal method near the boundaries, and is what
    the width curves plot.
    """

    lower: float
    upper: float
    alpha: float
    method: str
    analytic_width: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise DomainError(f"bounds out of order: [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, p: float) -> bool:
        return self.lower <= p <= self.upper


@dataclass(frozen=True)
class PlanResult:
    """A required device count together with the guarantee it satisfies."""

    devices: int
    alpha: float
    method: str
    target_width: float | None = None
    limits: "AliasLimits | None" = None
    inner: tuple[float, float] | None = None
    beta: float | None = None


def ci_normal(x, n, alpha) -> Interval:
    """Normal approximation interval: alias +- z * sqrt(alias(1-alias)/n).

    Bounds are clamped into [0, 1] for reporting, but the width is recorded
    before clamping, and the interval degenerates to a point at alias 0 or 1
    (the well-known failure mode of this estimator).
    """
    x, n = _check_x_n(x, n)
    alpha = _check_alpha(alpha)
    p = x / n
    half = _z_for(alpha) * math.sqrt(p * (1.0 - p) / n)
    return Interval(lower=max(0.0, p - half), upper=min(1.0, p + half),
                    alpha=alpha, method="normal", analytic_width=2.0 * half)


def ci_wilson(x, n, alpha) -> Interval:
    """Wilson's score interval; bounds fall in [0, 1] without clamping.

    The boundary counts use the closed-form root pair, where 0 and 1 are
    exact roots of the score quadratic; the general expression would land one
    ulp inside and lose them.
    """
    x, n = _check_x_n(x, n)
    alpha = _check_alpha(alpha)
    z = _z_for(alpha)
    z2 = z * z
    if x == 0:
        lower, upper = 0.0, z2 / (n + z2)
    elif x == n:
        lower, upper = n / (n + z2), 1.0
    else:
        p = x / n
        z2_n = z2 / n
        center = (p + 0.5 * z2_n) / (1.0 + z2_n)
        half = (z / (1.0 + z2_n)) * math.sqrt(p * (1.0 - p) / n + 0.25 * z2_n / n)
        lower, upper = center - half, center + half
    return Interval(lower=lower, upper=upper, alpha=alpha, method="wilson",
                    analytic_width=upper - lower)


def ci_clopper_pearson(x, n, alpha) -> Interval:
    """Exact interval from beta quantiles, at least nominal coverage.

    The boundary counts pin their outer bound: x = 0 forces lower = 0 and
    x = n forces upper = 1.
    """
    x, n = _check_x_n(x, n)
    alpha = _check_alpha(alpha)
    lower = 0.0 if x == 0 else beta_quantile(0.5 * alpha, x, n - x + 1)
    upper = 1.0 if x == n else beta_quantile(1.0 - 0.5 * alpha, x + 1, n - x)
    return Interval(lower=lower, upper=upper, alpha=alpha,
                    method="clopper_pearson", analytic_width=upper - lower)


_CI_BY_METHOD = {
    "normal": ci_normal,
    "wilson": ci_wilson,
    "clopper_pearson": ci_clopper_pearson,
}


def confidence_interval(method: str, x, n, alpha) -> Interval:
    """Dispatch to one of the three estimators by name."""
    try:
        fn = _CI_BY_METHOD[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}") from None
    return fn(x, n, alpha)


def ci_width(method: str, p_hat: float, n: float, alpha: float) -> float:
    """Interval width at a (possibly non-integer) expected count p_hat * n.

    This is the quantity the width curves plot; the Clopper-Pearson branch
    extends the count-based definition continuously through real-valued
    counts, and the normal branch reports the width before clamping.
    """
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}")
    p_hat = _as_probability(p_hat, "p_hat")
    alpha = _check_alpha(alpha)
    n = float(n)
    if not n >= 1.0:
        raise DomainError("n must be >= 1")
    if method == "normal":
        return 2.0 * _z_for(alpha) * math.sqrt(p_hat * (1.0 - p_hat) / n)
    if method == "wilson":
        z = _z_for(alpha)
        z2_n = z * z / n
        return 2.0 * (z / (1.0 + z2_n)) * math.sqrt(p_hat * (1.0 - p_hat) / n + 0.25 * z2_n / n)
    x = p_hat * n
    lower = 0.0 if x <= 0.0 else beta_quantile(0.5 * alpha, x, n - x + 1.0)
    upper = 1.0 if x >= n else beta_quantile(1.0 - 0.5 * alpha, x + 1.0, n - x)
    return upper - lower


def default_device_grid(points: int = 120) -> tuple[int, ...]:
    """Log-spaced device counts from 2 to 10000, deduplicated."""
    ratio = 10_000 / 2.0
    return tuple(sorted({int(round(2.0 * ratio ** (i / (points - 1)))) for i in range(points)}))


def default_alias_grid() -> tuple[float, ...]:
    """Alias values 0 to 1 in steps of 0.01."""
    return tuple(round(i * 0.01, 2) for i in range(101))


@dataclass(frozen=True)
class DeviceSweep:
    """Sweep of interval width over device counts at a fixed estimated alias."""

    p_hat: float = 0.5
    devices: tuple[int, ...] | None = None  # None selects the default log grid


@dataclass(frozen=True)
class AliasSweep:
    """Sweep of interval width over estimated alias at a fixed device count."""

    devices: int = 20
    alias_grid: tuple[float, ...] | None = None  # None selects 0..1 step 0.01


def ci_width_curve(method: str, alpha, sweep) -> list[tuple[float, float]]:
    """Width series for plotting, as (abscissa, width) pairs.

    The abscissa is the device count for a DeviceSweep and the estimated alias
    for an AliasSweep.
    """
    alpha = _check_alpha(alpha)
    if isinstance(sweep, DeviceSweep):
        grid = default_device_grid() if sweep.devices is None else tuple(sweep.devices)
        if not grid:
            raise DomainError("device grid must not be empty")
        p_hat = _as_probability(sweep.p_hat, "p_hat")
        if any(n < 1 for n in grid):
            raise DomainError("device counts must be >= 1")
        return [(float(n), ci_width(method, p_hat, n, alpha)) for n in grid]
    if isinstance(sweep, AliasSweep):
        grid = default_alias_grid() if sweep.alias_grid is None else tuple(sweep.alias_grid)
        if not grid:
            raise DomainError("alias grid must not be empty")
        if sweep.devices < 1:
            raise DomainError("devices must be >= 1")
        return [(float(p), ci_width(method, p, sweep.devices, alpha)) for p in grid]
    raise DomainError(f"sweep must be a DeviceSweep or AliasSweep, got {type(sweep).__name__}")


def plan_devices_normal(target_width, alpha) -> PlanResult:
    """First-cut device count from the normal approximation at alias 0.5:
    ceil((z / target_width)^2)."""
    target_width = _as_probability(target_width, "target_width", open_interval=True)
    alpha = _check_alpha(alpha)
    z = _z_for(alpha)
    return PlanResult(devices=math.ceil((z / target_width) ** 2), alpha=alpha,
                      method="normal", target_width=target_width)


def worst_case_width(method: str, n: int, alpha: float) -> float:
    """Width at the balanced count x = n/2, where the width curve peaks.

    Defined for even n: only there is the worst-case alias 0.5 realizable as
    an integer count.  Odd counts sit slightly off the peak and understate it.
    """
    n = _as_count(n, "n")
    if n < 2 or n % 2:
        raise DomainError("worst-case width needs an even device count >= 2")
    return confidence_interval(method, n // 2, n, alpha).width


def plan_devices_exact(method: str, target_width, alpha) -> PlanResult:
    """Smallest device count whose worst-case width meets the target.

    Candidates are even counts, so the balanced worst case is realizable at
    every probe.  Exponential bracketing plus binary search, then a linear
    walk-down so the result N is certified: width(N) <= target < width(N - 2)
    even if the discrete width curve wiggles.  Targets unreachable below the
    device cap raise CapacityError.
    """
    if method not in ("wilson", "clopper_pearson"):
        raise DomainError("exact planning supports 'wilson' and 'clopper_pearson'")
    target_width = _as_probability(target_width, "target_width", open_interval=True)
    alpha = _check_alpha(alpha)

    def ok(n: int) -> bool:
        return worst_case_width(method, n, alpha) <= target_width

    lo, hi = 0, 2
    while not ok(hi):
        lo = hi
        hi *= 2
        if hi > PLANNER_DEVICE_CAP:
            raise CapacityError(
                f"width {target_width} unreachable below {PLANNER_DEVICE_CAP} devices")
    while hi - lo > 2:
        mid = lo + (hi - lo) // 4 * 2  # even midpoint
        if ok(mid):
            hi = mid
        else:
            lo = mid
    n = hi
    while n > 2 and ok(n - 2):
        n -= 2
    return PlanResult(devices=n, alpha=alpha, method=method, target_width=target_width)

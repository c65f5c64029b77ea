#!/usr/bin/env python3
"""Reproduce the device-planning figures: counts needed for a target interval
width under each estimator, and the count needed to keep the false rejection
rate of the qualification test under control."""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bitalias import (AliasLimits, plan_devices_exact, plan_devices_frr,
                      plan_devices_normal, worst_case_width)


def main() -> None:
    alpha = 0.01
    width = 0.1
    print(f"target width {width} at alpha {alpha} (interval 0.5 +- {width / 2}):")
    plan = plan_devices_normal(width, alpha)
    print(f"  normal approximation  {plan.devices:>6} devices")
    for method in ("wilson", "clopper_pearson"):
        plan = plan_devices_exact(method, width, alpha)
        w_at = worst_case_width(method, plan.devices, alpha)
        w_before = worst_case_width(method, plan.devices - 2, alpha)
        print(f"  {method:<21} {plan.devices:>6} devices "
              f"(width {w_at:.5f}; {plan.devices - 2} gives {w_before:.5f})")

    limits = AliasLimits(0.45, 0.55)
    inner = (0.48, 0.52)
    beta = 0.01
    start = time.perf_counter()
    plan = plan_devices_frr(limits, inner, alpha, beta)
    elapsed = time.perf_counter() - start
    print(f"\nfalse-rejection plan for limits ({limits.p_l}, {limits.p_u}), "
          f"inner band {inner}, alpha {alpha}, beta {beta}:")
    print(f"  {plan.devices} devices (found in {elapsed:.2f}s)")


if __name__ == "__main__":
    main()

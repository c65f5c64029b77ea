#!/usr/bin/env python3
"""Emit interval-width curves as CSV files: width over device count at a
balanced alias, width over alias at a fixed count, and the accuracy
achievable at historical campaign sizes.  Output lands in ./curves/ unless a
directory is given."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bitalias import AliasSweep, DeviceSweep, METHODS, ci_width_curve

# a few historical campaign sizes, for context on achievable accuracy
HISTORICAL_DEVICE_COUNTS = (4, 45, 125, 160, 193, 996)


def dump(path: Path, header: str, rows) -> None:
    lines = [header] + [",".join(f"{v:.6g}" for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path} ({len(lines) - 1} rows)")


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("curves")
    out_dir.mkdir(parents=True, exist_ok=True)
    alpha = 0.01

    series = {m: dict(ci_width_curve(m, alpha, DeviceSweep(p_hat=0.5))) for m in METHODS}
    grid = sorted(series["wilson"])
    dump(out_dir / "width_over_devices.csv", "n,wilson,clopper_pearson,normal",
         [(n, series["wilson"][n], series["clopper_pearson"][n], series["normal"][n])
          for n in grid])

    series = {m: dict(ci_width_curve(m, alpha, AliasSweep(devices=20))) for m in METHODS}
    grid = sorted(series["wilson"])
    dump(out_dir / "width_over_alias.csv", "p_hat,wilson,clopper_pearson,normal",
         [(p, series["wilson"][p], series["clopper_pearson"][p], series["normal"][p])
          for p in grid])

    rows = []
    for n in HISTORICAL_DEVICE_COUNTS:
        [(_, w)] = ci_width_curve("clopper_pearson", alpha, DeviceSweep(p_hat=0.5, devices=(n,)))
        rows.append((n, w))
    dump(out_dir / "accuracy_at_campaign_sizes.csv", "n,clopper_pearson_width", rows)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Minimum fleet size versus interferer position and relay power.

Sweeps the interferer along a radial path from midspan toward each terminal
and sweeps the per-relay power at a fixed interferer, writing one CSV each.
"""

import argparse
import csv
from pathlib import Path

from uavrelay.channel import ChannelParams, Scenario
from uavrelay.errors import InfeasibleError
from uavrelay.multihop import design_min_uavs


def fleet_size(channel, msi_x, msi_y, p_uav, gamma, h):
    s = Scenario(1000.0, msi_x, msi_y, 80.0, p_uav, 80.0, 5.0, 400.0, channel)
    try:
        return design_min_uavs(s, h, gamma).placement.uav_count
    except InfeasibleError:
        return None


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("results/fleet"))
    parser.add_argument("--gamma", type=float, default=5.0)
    parser.add_argument("--h", type=float, default=20.0)
    parser.add_argument("--steps", type=int, default=9)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    channel = ChannelParams.from_carrier(2.0e9, 10 ** 0.01, 10 ** 2.1)

    path = args.out / "fleet_vs_position.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["toward", "msi_x_m", "msi_y_m", "n_uavs"])
        for toward, x_end in (("tx", 50.0), ("rx", 950.0)):
            for i in range(args.steps + 1):
                t = i / args.steps
                x = 500.0 + (x_end - 500.0) * t
                y = 400.0 + (40.0 - 400.0) * t
                n = fleet_size(channel, x, y, 1.0, args.gamma, args.h)
                writer.writerow([toward, f"{x:.1f}", f"{y:.1f}",
                                 "" if n is None else n])
    print(f"wrote {path}")

    path = args.out / "fleet_vs_power.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p_uav_w", "n_uavs"])
        for p_uav in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
            n = fleet_size(channel, 500.0, 400.0, p_uav, args.gamma, args.h)
            writer.writerow([f"{p_uav:g}", "" if n is None else n])
    print(f"wrote {path}")


if __name__ == "__main__":
    main()

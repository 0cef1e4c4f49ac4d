"""Shared fixtures: channel presets, random scenario generators, YAML writer."""

import random

import pytest

from uavrelay.channel import ChannelParams, Scenario

#: Default channel used across the suite (2 GHz carrier, standard excess losses).
C_LOS = 10 ** 0.01
C_NLOS = 10 ** 2.1


@pytest.fixture(scope="session")
def channel():
    return ChannelParams.from_carrier(2.0e9, C_LOS, C_NLOS)


def make_scenario(channel, *, d=1000.0, msi_x=500.0, msi_y=400.0,
                  p_tx=80.0, p_uav=1.0, p_msi=80.0,
                  h_min=5.0, h_max=400.0, d_min=0.0):
    return Scenario(d, msi_x, msi_y, p_tx, p_uav, p_msi, h_min, h_max,
                    channel, d_min)


def random_scenario(rng: random.Random, channel, *, d_hi=2000.0,
                    power_decades=3.0):
    """Log-uniform powers, uniform geometry; matches the oracle test regime."""
    d = rng.uniform(50.0, d_hi)
    half = power_decades / 2.0
    return Scenario(
        distance_tx_rx=d,
        msi_x=rng.uniform(0.0, d),
        msi_y=rng.uniform(0.0, d),
        p_tx=10.0 ** rng.uniform(-half, half),
        p_uav=10.0 ** rng.uniform(-half, half),
        p_msi=10.0 ** rng.uniform(-half, half),
        h_min=rng.uniform(1.0, 20.0),
        h_max=rng.uniform(40.0, 500.0),
        channel=channel,
    )


def write_scenario_yaml(path, *, d=1000.0, msi_x=500.0, msi_y=400.0,
                        p_tx=80.0, p_uav=1.0, p_msi=80.0,
                        h_min=5.0, h_max=400.0, d_min=None,
                        extra=""):
    lines = [
        "channel:",
        "  carrier_frequency_hz: 2.0e+9",
        f"  c_los: {C_LOS!r}",
        f"  c_nlos: {C_NLOS!r}",
        "geometry:",
        f"  d_m: {d}",
        f"  msi_x_m: {msi_x}",
        f"  msi_y_m: {msi_y}",
        f"  h_min_m: {h_min}",
        f"  h_max_m: {h_max}",
    ]
    if d_min is not None:
        lines.append(f"  d_min_m: {d_min}")
    lines += [
        "powers:",
        f"  p_tx_w: {p_tx}",
        f"  p_uav_w: {p_uav}",
        f"  p_msi_w: {p_msi}",
    ]
    text = "\n".join(lines)
    if extra:
        text += "\n" + extra
    path.write_text(text + "\n")
    return path

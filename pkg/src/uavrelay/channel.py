"""Path-loss and SIR evaluation for UAV relay links under a dominant ground interferer.

All SIR values are linear-scale ratios.  The transmitter sits at the origin,
the receiver at (D, 0, 0) and the interferer at (msi_x, msi_y, 0); relays fly
in the y = 0 plane at altitudes inside [h_min, h_max].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .errors import DomainError

if TYPE_CHECKING:  # pragma: no cover
    from .multihop import Placement

SPEED_OF_LIGHT = 299_792_458.0

#: Relative tolerance on sum(hop_distances) == D.
HOP_SUM_RTOL = 1e-6


@dataclass(frozen=True)
class ChannelParams:
    """Attenuation coefficients of the LoS / NLoS / air-ground links.

    mu_los and mu_nlos are the per-distance-squared attenuation factors
    derived from the carrier frequency and the excess-loss factors;
    eta_nlos is the coefficient of the air-ground links and defaults to
    mu_los when not overridden.
    """

    carrier_frequency: float
    excess_loss_los: float
    excess_loss_nlos: float
    mu_los: float
    mu_nlos: float
    eta_nlos: float
    path_loss_exponent: float = 2.0

    def __post_init__(self):
        for name in ("carrier_frequency", "excess_loss_los", "excess_loss_nlos",
                     "mu_los", "mu_nlos", "eta_nlos"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"ChannelParams.{name} must be > 0")
        if self.path_loss_exponent <= 0.0:
            raise DomainError("path_loss_exponent must be > 0")

    @classmethod
    def from_carrier(cls, carrier_frequency: float, excess_loss_los: float,
                     excess_loss_nlos: float, *, eta_nlos: float | None = None,
                     path_loss_exponent: float = 2.0) -> "ChannelParams":
        """Build the coefficients mu = C * (4*pi*f/c)**alpha from raw inputs."""
        if carrier_frequency <= 0.0:
            raise DomainError("carrier_frequency must be > 0")
        k = (4.0 * math.pi * carrier_frequency / SPEED_OF_LIGHT) ** path_loss_exponent
        mu_los = excess_loss_los * k
        mu_nlos = excess_loss_nlos * k
        return cls(carrier_frequency, excess_loss_los, excess_loss_nlos,
                   mu_los, mu_nlos,
                   mu_los if eta_nlos is None else eta_nlos,
                   path_loss_exponent)

    @classmethod
    def from_coefficients(cls, mu_los: float, mu_nlos: float, *,
                          eta_nlos: float | None = None,
                          carrier_frequency: float = 2.0e9,
                          path_loss_exponent: float = 2.0) -> "ChannelParams":
        """Build directly from the attenuation coefficients (tests, toy setups)."""
        k = (4.0 * math.pi * carrier_frequency / SPEED_OF_LIGHT) ** path_loss_exponent
        return cls(carrier_frequency, mu_los / k, mu_nlos / k,
                   mu_los, mu_nlos,
                   mu_los if eta_nlos is None else eta_nlos,
                   path_loss_exponent)

    @property
    def nlos_over_eta(self) -> float:
        """Ratio mu_nlos / eta_nlos appearing in the receiver-side SIR."""
        return self.mu_nlos / self.eta_nlos

    def require_quadratic_exponent(self) -> None:
        """Analytic planners only hold for a path-loss exponent of 2."""
        if self.path_loss_exponent != 2.0:
            raise DomainError(
                "analytic planners require path_loss_exponent == 2, "
                f"got {self.path_loss_exponent}")


@dataclass(frozen=True)
class Scenario:
    """Geometry, transmit powers and altitude band of one planning problem."""

    distance_tx_rx: float
    msi_x: float
    msi_y: float
    p_tx: float
    p_uav: float
    p_msi: float
    h_min: float
    h_max: float
    channel: ChannelParams
    d_min: float = 0.0

    def __post_init__(self):
        if self.distance_tx_rx <= 0.0:
            raise DomainError("distance_tx_rx must be > 0")
        if not (0.0 <= self.msi_x <= self.distance_tx_rx):
            raise DomainError("msi_x must lie in [0, distance_tx_rx]")
        if self.msi_y < 0.0:
            raise DomainError("msi_y must be >= 0")
        if not (0.0 < self.h_min <= self.h_max):
            raise DomainError("need 0 < h_min <= h_max")
        for name in ("p_tx", "p_uav", "p_msi"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be > 0")
        if self.d_min < 0.0:
            raise DomainError("d_min must be >= 0")


@dataclass(frozen=True)
class SirReport:
    """Per-link SIRs of a relay chain; the system SIR is the worst link."""

    per_link: tuple[float, ...]
    system_sir: float
    bottleneck_index: int

    @classmethod
    def from_links(cls, links: Sequence[float]) -> "SirReport":
        links = tuple(float(v) for v in links)
        idx = min(range(len(links)), key=lambda i: links[i])  # first on ties
        return cls(links, links[idx], idx)


def path_loss(params: ChannelParams, kind: str, distance: float) -> float:
    """Attenuation of a link of the given kind over `distance` meters.

    kind is one of "los", "nlos" (mu * d**alpha) or "air_ground" (eta * d**2).
    """
    if distance <= 0.0:
        raise DomainError("distance must be > 0")
    if kind == "los":
        return params.mu_los * distance ** params.path_loss_exponent
    if kind == "nlos":
        return params.mu_nlos * distance ** params.path_loss_exponent
    if kind == "air_ground":
        return params.eta_nlos * distance ** 2
    raise DomainError(f"unknown path-loss kind {kind!r}")


def sir_dual_uav(s: Scenario, x: float, h: float) -> float:
    """SIR of the Tx -> UAV link for a relay hovering at (x, 0, h)."""
    num = s.p_tx * ((x - s.msi_x) ** 2 + s.msi_y ** 2 + h ** 2)
    return num / (s.p_msi * (x ** 2 + h ** 2))


def sir_dual_rx(s: Scenario, x: float, h: float) -> float:
    """SIR of the UAV -> Rx link; the interference reaches the Rx over ground."""
    num = s.p_uav * (s.msi_y ** 2 + (s.distance_tx_rx - s.msi_x) ** 2)
    den = (s.p_msi * ((s.distance_tx_rx - x) ** 2 + h ** 2)
           * (s.channel.eta_nlos / s.channel.mu_nlos))
    return num / den


def sir_system_dual(s: Scenario, x: float, h: float) -> SirReport:
    """Decode-and-forward system SIR of the dual-hop link (min of the two)."""
    if not (0.0 <= x <= s.distance_tx_rx):
        raise DomainError("x outside [0, D]")
    if not (s.h_min <= h <= s.h_max):
        raise DomainError("h outside [h_min, h_max]")
    return SirReport.from_links((sir_dual_uav(s, x, h), sir_dual_rx(s, x, h)))


def _check_hop_sum(s: Scenario, hops: Sequence[float]) -> None:
    if len(hops) < 2:
        raise DomainError("a chain needs at least two hops (one UAV)")
    if any(d < 0.0 for d in hops):
        raise DomainError("hop distances must be >= 0")
    if abs(sum(hops) - s.distance_tx_rx) > HOP_SUM_RTOL * s.distance_tx_rx:
        raise DomainError("hop distances must sum to distance_tx_rx")


def multihop_link_sirs(s: Scenario, hops: Sequence[float], h: float) -> list[float]:
    """Per-link SIRs of a uniform-altitude chain Tx -> UAV_1 .. UAV_N -> Rx.

    Middle links are air-to-air (LoS, horizontal distance only); the
    interferer is seen from the receiving node of every link.
    """
    ch = s.channel
    X, Y = s.msi_x, s.msi_y
    n_uavs = len(hops) - 1
    pos = 0.0
    links = []
    # Tx -> UAV_1: ground-to-air on both signal and interference, eta cancels.
    pos += hops[0]
    links.append(s.p_tx * ((X - pos) ** 2 + Y ** 2 + h ** 2)
                 / (s.p_msi * (hops[0] ** 2 + h ** 2)))
    for k in range(1, n_uavs):
        d_k = hops[k]
        if d_k <= 0.0:
            raise DomainError("middle hop distance must be > 0")
        pos += d_k
        links.append(s.p_uav * ch.eta_nlos * ((X - pos) ** 2 + Y ** 2 + h ** 2)
                     / (ch.mu_los * s.p_msi * d_k ** 2))
    # UAV_N -> Rx: air-to-ground signal, ground-to-ground interference.
    d_last = hops[-1]
    links.append(s.p_uav * ch.mu_nlos * ((X - s.distance_tx_rx) ** 2 + Y ** 2)
                 / (ch.eta_nlos * s.p_msi * (d_last ** 2 + h ** 2)))
    return links


def sir_multihop(s: Scenario, placement: "Placement") -> SirReport:
    """SIR report of a uniform-altitude multi-hop chain."""
    hops = tuple(placement.hop_distances)
    alts = tuple(placement.altitudes)
    if len(set(alts)) != 1:
        raise DomainError("sir_multihop requires a uniform altitude; "
                          "use sir_multihop_var_alt")
    h = alts[0]
    _check_hop_sum(s, hops)
    if not (s.h_min <= h <= s.h_max):
        raise DomainError("altitude outside [h_min, h_max]")
    if any(d < s.d_min for d in hops[1:-1]):
        raise DomainError("middle hop below the safe-guard separation d_min")
    return SirReport.from_links(multihop_link_sirs(s, hops, h))


def multihop_link_sirs_var_alt(s: Scenario, hops: Sequence[float],
                               alts: Sequence[float]) -> list[float]:
    """Per-link SIRs of a chain with per-UAV altitudes.

    Air-to-air links use the 3-D distance sqrt(d_i**2 + (h_i - h_{i-1})**2).
    """
    ch = s.channel
    X, Y = s.msi_x, s.msi_y
    n_uavs = len(hops) - 1
    pos = hops[0]
    links = [s.p_tx * ((X - pos) ** 2 + Y ** 2 + alts[0] ** 2)
             / (s.p_msi * (hops[0] ** 2 + alts[0] ** 2))]
    for k in range(1, n_uavs):
        pos += hops[k]
        link_sq = hops[k] ** 2 + (alts[k] - alts[k - 1]) ** 2
        if link_sq <= 0.0:
            raise DomainError("coincident consecutive UAVs")
        links.append(s.p_uav * ch.eta_nlos * ((X - pos) ** 2 + Y ** 2 + alts[k] ** 2)
                     / (ch.mu_los * s.p_msi * link_sq))
    links.append(s.p_uav * ch.mu_nlos * ((X - s.distance_tx_rx) ** 2 + Y ** 2)
                 / (ch.eta_nlos * s.p_msi * (hops[-1] ** 2 + alts[-1] ** 2)))
    return links


def sir_multihop_var_alt(s: Scenario, placement: "Placement") -> SirReport:
    """SIR report of a multi-hop chain with per-UAV altitudes."""
    hops = tuple(placement.hop_distances)
    alts = tuple(placement.altitudes)
    _check_hop_sum(s, hops)
    if len(alts) != len(hops) - 1:
        raise DomainError("need one altitude per UAV")
    for h in alts:
        if not (s.h_min <= h <= s.h_max):
            raise DomainError("altitude outside [h_min, h_max]")
    # Safe-guard on the 3-D separation of consecutive airborne nodes.
    for k in range(1, len(alts)):
        sep = math.hypot(hops[k], alts[k] - alts[k - 1])
        if sep < s.d_min:
            raise DomainError("3-D UAV separation below d_min")
    return SirReport.from_links(multihop_link_sirs_var_alt(s, hops, alts))

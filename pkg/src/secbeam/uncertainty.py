"""Rectangular eavesdropper uncertainty regions and their grid discretization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    GroundPosition,
    LinkBudgetParams,
    SatelliteGeometry,
    _compose_batch,
    nominal_rain,
    noise_variance,
    sample_rain,
)

RAIN_POLICIES = ("nominal", "sampled")


@dataclass(frozen=True)
class EveRegion:
    """Axis-aligned rectangle of possible eavesdropper positions, km."""

    x_lower_km: float
    x_upper_km: float
    y_lower_km: float
    y_upper_km: float

    def __post_init__(self):
        for name in ("x_lower_km", "x_upper_km", "y_lower_km", "y_upper_km"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.x_lower_km > self.x_upper_km:
            raise ValueError("x_lower_km must be <= x_upper_km")
        if self.y_lower_km > self.y_upper_km:
            raise ValueError("y_lower_km must be <= y_upper_km")

    @property
    def center(self) -> GroundPosition:
        return GroundPosition(
            (self.x_lower_km + self.x_upper_km) / 2.0,
            (self.y_lower_km + self.y_upper_km) / 2.0,
        )

    def with_edge(self, edge_km: float) -> "EveRegion":
        """Same center, rescaled to a square region of the given edge length."""
        if edge_km < 0:
            raise ValueError("edge_km must be >= 0")
        c = self.center
        half = edge_km / 2.0
        return EveRegion(c.x_km - half, c.x_km + half, c.y_km - half, c.y_km + half)


def discretize(
    region: EveRegion, m1: int, m2: int, inclusive: bool = False
) -> list[GroundPosition]:
    """Uniform m1 x m2 grid over the region, upper edges excluded.

    Spacing is dx = (x_upper - x_lower) / m1 and point (i, j) sits at exactly
    (x_lower + i*dx, y_lower + j*dy), i-major order.  With inclusive=True the
    upper-edge points i = m1 and j = m2 are appended for a conservative cover.
    """
    if m1 < 1 or m2 < 1:
        raise ValueError("m1 and m2 must be >= 1")
    dx = (region.x_upper_km - region.x_lower_km) / m1
    dy = (region.y_upper_km - region.y_lower_km) / m2
    n1 = m1 + 1 if inclusive else m1
    n2 = m2 + 1 if inclusive else m2
    return [
        GroundPosition(region.x_lower_km + i * dx, region.y_lower_km + j * dy)
        for i in range(n1)
        for j in range(n2)
    ]


@dataclass(frozen=True)
class EveRegionGrid:
    """Discretized region with the noise-normalized channel at every point.

    m1 and m2 are the stored per-axis point counts (the requested counts plus
    one each in inclusive mode); channels has one row per point in the same
    i-major order as points.
    """

    region: EveRegion
    m1: int
    m2: int
    points: tuple[GroundPosition, ...]
    channels: np.ndarray
    sigma2_w: float

    def __post_init__(self):
        if len(self.points) != self.m1 * self.m2:
            raise ValueError(
                f"expected {self.m1 * self.m2} points, got {len(self.points)}"
            )
        ch = np.asarray(self.channels, dtype=complex)
        object.__setattr__(self, "channels", ch)
        if ch.ndim != 2 or ch.shape[0] != len(self.points):
            raise ValueError("channels must be (n_points, N)")
        if not self.sigma2_w > 0:
            raise ValueError("sigma2_w must be > 0")

    @property
    def n_points(self) -> int:
        return len(self.points)


def grid_channels(
    sat: SatelliteGeometry,
    params: LinkBudgetParams,
    regions: list[EveRegion] | tuple[EveRegion, ...],
    m1: int,
    m2: int,
    rain_policy: str = "nominal",
    rng: np.random.Generator | None = None,
    inclusive: bool = False,
    eve_params: LinkBudgetParams | None = None,
) -> list[EveRegionGrid]:
    """Grid every region and synthesize the channel at each grid point.

    rain_policy "nominal" pins every fade at the dB-mean; "sampled" draws one
    rain vector per region (shared by all its grid points) from rng.  Eve
    receivers default to the same link budget as params; pass eve_params to
    override their noise or gains.
    """
    if rain_policy not in RAIN_POLICIES:
        raise ValueError(f"rain_policy must be one of {RAIN_POLICIES}")
    if rain_policy == "sampled" and rng is None:
        raise ValueError("sampled rain policy needs an rng")
    if len(regions) < 1:
        raise ValueError("need at least one region")
    p_eve = eve_params if eve_params is not None else params
    sigma2 = noise_variance(p_eve)
    sigma = math.sqrt(sigma2)

    grids = []
    for region in regions:
        points = discretize(region, m1, m2, inclusive=inclusive)
        if rain_policy == "sampled":
            rain = sample_rain(p_eve, rng, sat.n_antennas)
        else:
            rain = nominal_rain(p_eve, sat.n_antennas)
        pos = np.array([[p.x_km, p.y_km] for p in points])
        h = _compose_batch(sat, pos, p_eve, np.broadcast_to(rain, (len(points), sat.n_antennas)))
        n1 = m1 + 1 if inclusive else m1
        n2 = m2 + 1 if inclusive else m2
        grids.append(
            EveRegionGrid(
                region=region,
                m1=n1,
                m2=n2,
                points=tuple(points),
                channels=h / sigma,
                sigma2_w=sigma2,
            )
        )
    return grids

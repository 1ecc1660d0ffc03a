"""Downlink channel synthesis for a multibeam GEO satellite.

Geometry is a flat tangent plane: ground positions are (x, y) in km with the
sub-satellite point at the origin and the satellite boresight pointing down.
Antenna feeds sit at small metre-scale offsets around the satellite position,
one spot beam per feed.  A channel vector collects, per feed, the receive
antenna gain, rain fading, beam gain and free-space response of the link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

LIGHT_SPEED_M_S = 2.99792458e8
BOLTZMANN_J_K = 1.38e-23

# ground coordinates beyond this are outside any sensible service area
_MAX_ABS_COORD_KM = 10_000.0


@dataclass(frozen=True)
class GroundPosition:
    """Point on the ground plane, km from the sub-satellite point."""

    x_km: float
    y_km: float

    def __post_init__(self):
        for name in ("x_km", "y_km"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite, got {val!r}")
            if abs(val) > _MAX_ABS_COORD_KM:
                raise ValueError(f"|{name}| must be <= {_MAX_ABS_COORD_KM} km, got {val}")


@dataclass(frozen=True)
class SatelliteGeometry:
    """Satellite position plus the feed layout and the beam pointing.

    Parameters
    ----------
    altitude_km : float
        Height of the satellite above the ground plane, > 0.
    antenna_offsets_m : tuple of (dx, dy, dz) triples
        Feed positions in metres relative to the satellite reference point
        at (0, 0, altitude).
    beam_centers : tuple of GroundPosition
        Aim point of each feed's spot beam, one per feed.
    """

    altitude_km: float
    antenna_offsets_m: tuple[tuple[float, float, float], ...]
    beam_centers: tuple[GroundPosition, ...]

    def __post_init__(self):
        if not (math.isfinite(self.altitude_km) and self.altitude_km > 0):
            raise ValueError(f"altitude_km must be > 0, got {self.altitude_km}")
        if len(self.antenna_offsets_m) < 1:
            raise ValueError("need at least one antenna")
        if len(self.beam_centers) != len(self.antenna_offsets_m):
            raise ValueError(
                f"{len(self.antenna_offsets_m)} antennas but "
                f"{len(self.beam_centers)} beam centers"
            )
        for off in self.antenna_offsets_m:
            if len(off) != 3 or not all(math.isfinite(c) for c in off):
                raise ValueError(f"bad antenna offset {off!r}")

    @property
    def n_antennas(self) -> int:
        return len(self.antenna_offsets_m)

    @cached_property
    def antenna_positions_km(self) -> np.ndarray:
        """(N, 3) feed positions in km, offsets applied to (0, 0, altitude)."""
        off = np.asarray(self.antenna_offsets_m, dtype=float) / 1000.0
        return off + np.array([0.0, 0.0, self.altitude_km])

    @cached_property
    def beam_center_array_km(self) -> np.ndarray:
        """(N, 2) beam aim points in km."""
        return np.array([[c.x_km, c.y_km] for c in self.beam_centers])


@dataclass(frozen=True)
class LinkBudgetParams:
    """Link-budget constants shared by every receiver.

    Gains that enter amplitude formulas directly are stored linear
    (max_beam_gain); the receive antenna mask works in dB so max_user_gain_db
    stays in dB.  Rain parameters describe the dB-domain lognormal fade.
    """

    carrier_hz: float
    max_beam_gain: float
    half_power_beamwidth_rad: float
    max_user_gain_db: float
    rain_mu_db: float
    rain_sigma_db: float
    noise_bandwidth_hz: float
    noise_temperature_k: float

    def __post_init__(self):
        positive = (
            "carrier_hz",
            "max_beam_gain",
            "half_power_beamwidth_rad",
            "noise_bandwidth_hz",
            "noise_temperature_k",
        )
        for name in positive:
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be > 0, got {val}")
        # 0 dB is unit receive gain, a legitimate value for a log quantity
        if not (math.isfinite(self.max_user_gain_db) and self.max_user_gain_db >= 0):
            raise ValueError(
                f"max_user_gain_db must be >= 0, got {self.max_user_gain_db}"
            )
        if not math.isfinite(self.rain_mu_db):
            raise ValueError(f"rain_mu_db must be finite, got {self.rain_mu_db}")
        # sigma = 0 is the degenerate deterministic fade
        if not (math.isfinite(self.rain_sigma_db) and self.rain_sigma_db >= 0):
            raise ValueError(f"rain_sigma_db must be >= 0, got {self.rain_sigma_db}")
        if not self.half_power_beamwidth_rad < math.pi / 2:
            raise ValueError("half_power_beamwidth_rad must be < pi/2")


@dataclass(frozen=True)
class ChannelVector:
    """Complex channel h with its noise variance and normalized form."""

    h: np.ndarray
    sigma2_w: float

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        object.__setattr__(self, "h", h)
        if h.ndim != 1 or h.size < 1:
            raise ValueError("h must be a 1-D vector")
        if not (math.isfinite(self.sigma2_w) and self.sigma2_w > 0):
            raise ValueError(f"sigma2_w must be > 0, got {self.sigma2_w}")

    @cached_property
    def h_tilde(self) -> np.ndarray:
        """Noise-normalized channel h / sigma."""
        return self.h / math.sqrt(self.sigma2_w)


def link_geometry(
    sat: SatelliteGeometry,
    pos: GroundPosition,
    mispoint_rad: float = 0.0,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Per-antenna slant ranges and beam off-axis angles for one ground point.

    Returns
    -------
    d_km : (N,) slant range from each feed to the ground point.
    phi_rad : (N,) angle at the satellite between the line of sight to the
        ground point and the line of sight to each beam center.
    theta_rad : off-boresight angle of the ground terminal's own antenna.
        Terminals are assumed pointed at the satellite, so this is just the
        mispointing override (0 by default).
    """
    d, phi = _batch_geometry(sat, np.array([[pos.x_km, pos.y_km]]))
    return d[0], phi[0], float(mispoint_rad)


def _batch_geometry(sat: SatelliteGeometry, pos_km: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized geometry: pos_km is (P, 2), returns d and phi of shape (P, N)."""
    pos_km = np.asarray(pos_km, dtype=float)
    users = np.concatenate([pos_km, np.zeros((pos_km.shape[0], 1))], axis=1)  # (P, 3)
    sat_center = np.array([0.0, 0.0, sat.altitude_km])

    # slant range feed -> ground point
    diff = users[:, None, :] - sat.antenna_positions_km[None, :, :]  # (P, N, 3)
    d = np.linalg.norm(diff, axis=2)
    if np.any(d <= 0):
        raise ValueError("ground point coincides with an antenna")

    # off-axis angle measured at the satellite reference point
    to_user = users - sat_center  # (P, 3)
    centers = np.concatenate(
        [sat.beam_center_array_km, np.zeros((sat.n_antennas, 1))], axis=1
    )
    to_beam = centers - sat_center  # (N, 3)
    nu = np.linalg.norm(to_user, axis=1)
    nb = np.linalg.norm(to_beam, axis=1)
    cosang = (to_user @ to_beam.T) / (nu[:, None] * nb[None, :])
    phi = np.arccos(np.clip(cosang, -1.0, 1.0))
    return d, phi


# ---------------------------------------------------------------------------
# Bessel functions of the first kind, orders 1 and 3 only.
#
# The ascending power series is exact arithmetic-wise but alternating, so in
# double precision its cancellation error grows like eps * I_nu(|x|).  That
# stays below 1e-11 only for |x| <~ 12; past the cutoff we switch to Miller's
# backward recurrence, which is stable for all arguments of interest here.
# ---------------------------------------------------------------------------

_SERIES_CUTOFF = 12.0


def bessel_j(order: int, x):
    """J_order(x) for order in {1, 3}, scalar or ndarray, abs err <= 1e-10."""
    if order not in (1, 3):
        raise ValueError(f"order must be 1 or 3, got {order}")
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise ValueError("x must be finite")
    out = np.empty_like(arr)

    small = np.abs(arr) <= _SERIES_CUTOFF
    if np.any(small):
        out[small] = _bessel_series(order, arr[small])
    big = ~small
    for idx in np.nonzero(big)[0]:
        out[idx] = _bessel_miller(order, float(arr[idx]))
    return float(out[0]) if scalar else out


def _bessel_series(order: int, x: np.ndarray) -> np.ndarray:
    """Ascending power series, vectorized, adaptive term count."""
    half = x / 2.0
    hsq = half * half
    # leading term (x/2)^order / order!
    term = half**order / math.factorial(order)
    total = term.copy()
    for m in range(1, 200):
        term = term * (-hsq) / (m * (m + order))
        total += term
        if np.all(np.abs(term) <= 1e-18 * (1.0 + np.abs(total))):
            break
    return total


def _bessel_miller(order: int, x: float) -> float:
    """Miller backward recurrence, normalized by J0 + 2*sum J_2k = 1."""
    if x < 0:
        # orders 1 and 3 are odd functions
        return -_bessel_miller(order, -x)
    # start high enough that the downward tail has fully decayed
    m_start = int(x + 20 + 8.0 * math.sqrt(x))
    if m_start % 2:
        m_start += 1
    f_hi = 0.0
    f_lo = 1e-30
    norm = 0.0
    j_want = 0.0
    for n in range(m_start, 0, -1):
        f_next = (2.0 * n / x) * f_lo - f_hi
        f_hi, f_lo = f_lo, f_next
        if n - 1 == order:
            j_want = f_lo
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm += 2.0 * f_lo
        if abs(f_lo) > 1e250:
            f_hi *= 1e-250
            f_lo *= 1e-250
            norm *= 1e-250
            j_want *= 1e-250
    norm += f_lo  # adds J0 contribution
    return j_want / norm


# taylor branch of the tapered-aperture pattern, see beam_gain
_U_SWITCH = 1e-3


def beam_gain(phi, params: LinkBudgetParams):
    """Spot-beam gain toward off-axis angle phi (rad), linear.

    Tapered-aperture pattern b_max * (J1(u)/(2u) + 36*J3(u)/u^3)^2 with
    u = 2.07123 * sin(phi) / sin(phi_3dB).  The u -> 0 limit is exactly
    b_max (the bracket tends to 1/4 + 3/4); tiny u uses the Taylor branch
    1 - 5u^2/64 + 19u^4/7680 to avoid 0/0.
    """
    phi_arr = np.asarray(phi, dtype=float)
    scalar = phi_arr.ndim == 0
    phi_arr = np.atleast_1d(phi_arr)
    if np.any(phi_arr < 0) or np.any(phi_arr >= math.pi / 2):
        raise ValueError("phi must lie in [0, pi/2)")

    u = 2.07123 * np.sin(phi_arr) / math.sin(params.half_power_beamwidth_rad)
    f = np.empty_like(u)
    tiny = u < _U_SWITCH
    ut = u[tiny]
    f[tiny] = 1.0 - 5.0 * ut**2 / 64.0 + 19.0 * ut**4 / 7680.0
    ub = u[~tiny]
    if ub.size:
        f[~tiny] = bessel_j(1, ub) / (2.0 * ub) + 36.0 * bessel_j(3, ub) / ub**3
    gain = params.max_beam_gain * f**2
    return float(gain[0]) if scalar else gain


def receiver_gain(theta_rad: float, max_gain_db: float) -> float:
    """Receive antenna gain mask in dB at off-boresight angle theta (rad).

    Flat max gain out to 1 degree, then 32 - 25*log10(theta_deg) out to
    48 degrees, then -10 dB.  Each boundary angle takes the left branch;
    the branch tests compare in radians so that radians(1.0) and
    radians(48.0) land exactly on their boundaries.
    """
    if not (0 <= theta_rad <= math.pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta_rad}")
    if theta_rad <= math.radians(1.0):
        return float(max_gain_db)
    if theta_rad <= math.radians(48.0):
        return 32.0 - 25.0 * math.log10(math.degrees(theta_rad))
    return -10.0


def free_space_response(d_km, carrier_hz: float):
    """Free-space channel response at slant range d (km), complex.

    Amplitude c / (4 pi f d) with the carrier-phase rotation exp(-j 2 pi f d / c),
    d converted to metres.
    """
    d_arr = np.asarray(d_km, dtype=float)
    if np.any(d_arr <= 0):
        raise ValueError("distance must be > 0")
    d_m = d_arr * 1000.0
    amp = LIGHT_SPEED_M_S / (4.0 * math.pi * carrier_hz * d_m)
    phase = -2.0 * math.pi * carrier_hz * d_m / LIGHT_SPEED_M_S
    out = amp * np.exp(1j * phase)
    return complex(out) if np.ndim(d_km) == 0 else out


def sample_rain(params: LinkBudgetParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n lognormal rain fades: r = 10^(z/20), z ~ N(rain_mu, rain_sigma^2)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    z = rng.normal(params.rain_mu_db, params.rain_sigma_db, size=n)
    return 10.0 ** (z / 20.0)


def nominal_rain(params: LinkBudgetParams, n: int) -> np.ndarray:
    """Deterministic rain vector pinned at the dB-domain mean."""
    return np.full(n, 10.0 ** (params.rain_mu_db / 20.0))


def noise_variance(params: LinkBudgetParams) -> float:
    """Thermal noise power kappa * B * T in watts."""
    return BOLTZMANN_J_K * params.noise_bandwidth_hz * params.noise_temperature_k


def compose_channel(
    sat: SatelliteGeometry,
    pos: GroundPosition,
    params: LinkBudgetParams,
    rain: np.ndarray | None = None,
    mispoint_rad: float = 0.0,
) -> ChannelVector:
    """Full channel vector toward one ground terminal.

    h_n = sqrt(G_r) * r_n^(-1/2) * b_n^(1/2) * fsr_n per feed, with G_r the
    linear receive gain, r the rain fades (nominal dB-mean fade when rain is
    None), b the beam gains and fsr the free-space responses.
    """
    n = sat.n_antennas
    if rain is None:
        rain_vec = nominal_rain(params, n)
    else:
        rain_vec = np.asarray(rain, dtype=float)
        if rain_vec.shape != (n,):
            raise ValueError(f"rain must have shape ({n},), got {rain_vec.shape}")
        if np.any(rain_vec <= 0):
            raise ValueError("rain entries must be > 0")
    h = _compose_batch(sat, np.array([[pos.x_km, pos.y_km]]), params, rain_vec[None, :], mispoint_rad)[0]
    return ChannelVector(h=h, sigma2_w=noise_variance(params))


def _compose_batch(
    sat: SatelliteGeometry,
    pos_km: np.ndarray,
    params: LinkBudgetParams,
    rain: np.ndarray,
    mispoint_rad: float = 0.0,
) -> np.ndarray:
    """Channels for many ground points at once: (P, 2) and (P, N) -> (P, N)."""
    d, phi = _batch_geometry(sat, pos_km)
    b = beam_gain(phi, params)
    g_amp = 10.0 ** (receiver_gain(mispoint_rad, params.max_user_gain_db) / 20.0)
    fsr = free_space_response(d, params.carrier_hz)
    return g_amp * rain ** (-0.5) * np.sqrt(b) * fsr

"""Free-space channel rows under planar and spherical wavefront models.

Three per-element gain models are provided. The planar model (UPW) applies a
linear phase profile with uniform amplitude; the uniform spherical model
(USW) uses exact element distances for phase while keeping amplitude uniform;
the non-uniform spherical model (NUSW) lets both phase and amplitude follow
the exact per-element distance. ``classify_region`` picks the lightest model
that is valid at a given point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, SingularGeometryError
from .geometry import SPEED_OF_LIGHT, ArrayGeometry, aperture_of, rayleigh_distance

UPW = "UPW"
USW = "USW"
NUSW = "NUSW"

FAR_FIELD = "far-field"
RADIATING_NEAR_FIELD = "radiating-near-field"
NON_UNIFORM_NEAR_FIELD = "non-uniform-near-field"

_COINCIDENCE_EPS = 1e-9  # m


def wavelength(frequency: float) -> float:
    if frequency <= 0:
        raise ConfigError(f"frequency must be > 0, got {frequency}")
    return SPEED_OF_LIGHT / frequency


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ConfigError(f"power must be > 0 W to express in dBm, got {watts}")
    return 10.0 * math.log10(watts) + 30.0


def free_space_amplitude(distance: float, frequency: float) -> float:
    """Amplitude gain lambda / (4 pi d) of an isotropic free-space link."""
    if distance <= 0:
        raise ConfigError(f"distance must be > 0, got {distance}")
    return wavelength(frequency) / (4.0 * math.pi * distance)


def free_space_path_loss_db(distance: float, frequency: float) -> float:
    """Free-space path loss 20 log10(4 pi d / lambda) in dB."""
    return -20.0 * math.log10(free_space_amplitude(distance, frequency))


def noise_power(noise_psd_dbm_hz: float, bandwidth_hz: float) -> float:
    """Integrated thermal noise power in watts for a flat PSD in dBm/Hz."""
    if bandwidth_hz <= 0:
        raise ConfigError(f"bandwidth must be > 0, got {bandwidth_hz}")
    return dbm_to_watts(noise_psd_dbm_hz) * bandwidth_hz


@dataclass(frozen=True)
class RadioConfig:
    """Radio-level constants of a scenario."""

    carrier_frequency_hz: float
    bandwidth_hz: float
    noise_psd_dbm_hz: float = -174.0
    tx_power_dbm: float = 23.0
    pa_efficiency: float = 1.0
    waveguide_index: float = math.sqrt(3.0)

    def __post_init__(self):
        if self.carrier_frequency_hz <= 0:
            raise ConfigError("carrier_frequency_hz must be > 0")
        if self.bandwidth_hz <= 0:
            raise ConfigError("bandwidth_hz must be > 0")
        if not 0.0 < self.pa_efficiency <= 1.0:
            raise ConfigError("pa_efficiency must lie in (0, 1]")
        if self.waveguide_index < 1.0:
            raise ConfigError("waveguide_index must be >= 1")

    @property
    def wavelength_m(self) -> float:
        return wavelength(self.carrier_frequency_hz)

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_power_w(self) -> float:
        return noise_power(self.noise_psd_dbm_hz, self.bandwidth_hz)


def direction_vector(azimuth_deg: float, elevation_deg: float) -> np.ndarray:
    """Unit vector from the array toward (azimuth, elevation).

    Boresight (0, 0) points straight down at the ground; azimuth steers
    within the x-z plane and elevation tilts toward +y.
    """
    az, el = math.radians(azimuth_deg), math.radians(elevation_deg)
    return np.array([math.cos(el) * math.sin(az),
                     math.sin(el),
                     -math.cos(el) * math.cos(az)])


def angles_of(direction) -> tuple[float, float]:
    """Inverse of direction_vector: (azimuth_deg, elevation_deg) of a vector."""
    d = np.asarray(direction, dtype=float)
    n = np.linalg.norm(d)
    if n == 0:
        raise ConfigError("cannot take angles of a zero direction vector")
    d = d / n
    el = math.asin(np.clip(d[1], -1.0, 1.0))
    az = math.atan2(d[0], -d[2])
    return math.degrees(az), math.degrees(el)


def _element_distances(geometry: ArrayGeometry, point) -> np.ndarray:
    point = np.asarray(point, dtype=float).reshape(3)
    d = np.linalg.norm(geometry.element_positions - point, axis=1)
    if d.min() < _COINCIDENCE_EPS:
        raise SingularGeometryError(
            f"point {point.tolist()} coincides with element {int(d.argmin())}")
    return d


@dataclass(frozen=True)
class RegionClassification:
    """Wavefront regime of a point relative to the array."""

    region: str
    rayleigh_distance_m: float
    uniform_power_distance_m: float
    distance_m: float
    amplitude_ratio: float


def uniform_power_distance(geometry: ArrayGeometry, direction,
                           amplitude_tolerance: float = 0.01) -> float:
    """Distance along ``direction`` beyond which per-element amplitudes stay
    within a factor 1 + amplitude_tolerance of each other."""
    if amplitude_tolerance <= 0:
        raise ConfigError("amplitude_tolerance must be > 0")
    center = geometry.center
    radius = float(np.linalg.norm(geometry.element_positions - center, axis=1).max())
    if radius == 0.0:
        return 0.0
    u = np.asarray(direction, dtype=float).reshape(3)
    u = u / np.linalg.norm(u)
    target = 1.0 + amplitude_tolerance

    def ratio(d):
        dist = np.linalg.norm(geometry.element_positions - (center + d * u), axis=1)
        return dist.max() / dist.min()

    lo = 1.5 * radius
    if ratio(lo) <= target:
        return lo
    hi = 2.0 * lo
    while ratio(hi) > target:
        hi *= 2.0
        if hi > 1e9 * radius:
            return hi
    return float(brentq(lambda d: ratio(d) - target, lo, hi, rtol=1e-12))


def classify_region(geometry: ArrayGeometry, point, frequency: float,
                    amplitude_tolerance: float = 0.01) -> RegionClassification:
    """Classify a point as far-field, radiating near-field, or non-uniform near-field.

    Far-field wins at distances at or beyond the Rayleigh boundary; closer in,
    the point is non-uniform near-field when the element amplitude spread
    exceeds 1 + amplitude_tolerance and radiating near-field otherwise.
    """
    point = np.asarray(point, dtype=float).reshape(3)
    d_elem = _element_distances(geometry, point)
    center = geometry.center
    distance = float(np.linalg.norm(point - center))

    if geometry.n_elements >= 2:
        d_rayleigh = rayleigh_distance(aperture_of(geometry), frequency)
    else:
        d_rayleigh = 0.0

    ratio = float(d_elem.max() / d_elem.min())
    if distance >= d_rayleigh:
        region = FAR_FIELD
    elif ratio > 1.0 + amplitude_tolerance:
        region = NON_UNIFORM_NEAR_FIELD
    else:
        region = RADIATING_NEAR_FIELD

    direction = (point - center) / distance if distance > 0 else np.array([0.0, 0.0, -1.0])
    d_uniform = uniform_power_distance(geometry, direction, amplitude_tolerance)

    return RegionClassification(
        region=region,
        rayleigh_distance_m=d_rayleigh,
        uniform_power_distance_m=d_uniform,
        distance_m=distance,
        amplitude_ratio=ratio,
    )


def channel_upw(geometry: ArrayGeometry, azimuth_deg: float, elevation_deg: float,
                frequency: float, reference_distance: float) -> np.ndarray:
    """Planar-wavefront channel row: linear phase, uniform amplitude.

    The phase grows with the projection of the element offset onto the target
    direction, which is the large-distance limit of the spherical rows.
    """
    if reference_distance <= 0:
        raise ConfigError(f"reference_distance must be > 0, got {reference_distance}")
    lam = wavelength(frequency)
    u = direction_vector(azimuth_deg, elevation_deg)
    offsets = geometry.element_positions - geometry.center
    phase = (2.0 * np.pi / lam) * (offsets @ u)
    amplitude = lam / (4.0 * np.pi * reference_distance)
    return amplitude * np.exp(1j * phase)


def channel_usw(geometry: ArrayGeometry, point, frequency: float) -> np.ndarray:
    """Spherical-phase channel row with uniform amplitude.

    The common amplitude is taken at the mean element distance, so an
    equidistant point yields exactly the non-uniform row.
    """
    lam = wavelength(frequency)
    d = _element_distances(geometry, point)
    amplitude = lam / (4.0 * np.pi * d.mean())
    return amplitude * np.exp(-2j * np.pi * d / lam)


def channel_nusw(geometry: ArrayGeometry, point, frequency: float) -> np.ndarray:
    """Spherical channel row with exact per-element phase and amplitude."""
    lam = wavelength(frequency)
    d = _element_distances(geometry, point)
    return (lam / (4.0 * np.pi * d)) * np.exp(-2j * np.pi * d / lam)


@dataclass(frozen=True, eq=False)
class AutoChannel:
    """Channel row plus the model selected for it."""

    gains: np.ndarray
    model: str
    classification: RegionClassification


def channel_auto(geometry: ArrayGeometry, point, frequency: float,
                 amplitude_tolerance: float = 0.01) -> AutoChannel:
    """Dispatch to the lightest valid wavefront model for the given point."""
    cls = classify_region(geometry, point, frequency, amplitude_tolerance)
    if cls.region == FAR_FIELD:
        point = np.asarray(point, dtype=float).reshape(3)
        az, el = angles_of(point - geometry.center)
        ref = float(_element_distances(geometry, point).mean())
        return AutoChannel(channel_upw(geometry, az, el, frequency, ref), UPW, cls)
    if cls.region == RADIATING_NEAR_FIELD:
        return AutoChannel(channel_usw(geometry, point, frequency), USW, cls)
    return AutoChannel(channel_nusw(geometry, point, frequency), NUSW, cls)


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Per-user, per-element complex gains and the model that produced them."""

    gains: np.ndarray       # (users, elements)
    model: str              # common model tag, or "mixed"
    frequency: float
    per_user_models: tuple

    def __post_init__(self):
        if not np.all(np.isfinite(self.gains)):
            raise ValueError("channel gains must be finite")


def channel_matrix(geometry: ArrayGeometry, points, frequency: float,
                   model: str = "auto", amplitude_tolerance: float = 0.01) -> ChannelMatrix:
    """Stack per-user channel rows for a list of 3-D points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    rows, tags = [], []
    for point in points:
        if model == "auto":
            auto = channel_auto(geometry, point, frequency, amplitude_tolerance)
            rows.append(auto.gains)
            tags.append(auto.model)
        elif model in ("upw", UPW):
            az, el = angles_of(point - geometry.center)
            ref = float(_element_distances(geometry, point).mean())
            rows.append(channel_upw(geometry, az, el, frequency, ref))
            tags.append(UPW)
        elif model in ("usw", USW):
            rows.append(channel_usw(geometry, point, frequency))
            tags.append(USW)
        elif model in ("nusw", NUSW):
            rows.append(channel_nusw(geometry, point, frequency))
            tags.append(NUSW)
        else:
            raise ConfigError(f"unknown channel model {model!r}")
    common = tags[0] if len(set(tags)) == 1 else "mixed"
    gains = np.vstack(rows)
    gains.flags.writeable = False
    return ChannelMatrix(gains=gains, model=common, frequency=float(frequency),
                         per_user_models=tuple(tags))


def point_source_gains(source_position, points, frequency: float) -> np.ndarray:
    """Complex gains from a single isotropic antenna to each point."""
    source = np.asarray(source_position, dtype=float).reshape(3)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    d = np.linalg.norm(points - source, axis=1)
    if d.min() < _COINCIDENCE_EPS:
        raise SingularGeometryError("a point coincides with the source antenna")
    lam = wavelength(frequency)
    return (lam / (4.0 * np.pi * d)) * np.exp(-2j * np.pi * d / lam)


def normalized_correlation(a, b) -> float:
    """|<a, b>| / (||a|| ||b||) between two complex vectors."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(np.vdot(a, b)) / (na * nb))

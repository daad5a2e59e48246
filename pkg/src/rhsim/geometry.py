"""3-D layout of the multi-panel surface, its feed network, and the ground users.

Coordinates are absolute, in meters. The platform hovers above the ground
plane z = 0 with +z pointing up; the radiating elements lie in the horizontal
plane through the platform and the feed layer sits slightly below it.
Boresight points straight down at the ground.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .errors import ConfigError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

FEED_LAYER_DEPTH = 0.005  # m between the radiating plane and the feed layer

_AXES = {"x": 0, "y": 1}


def _frozen(values, dtype=float):
    out = np.ascontiguousarray(values, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Element and feed positions of a tiled multi-panel radiating surface.

    Immutable after construction; the position arrays are read-only views.
    """

    panels: int
    elements_x: int                # per panel, along x
    elements_y: int                # per panel, along y
    dx: float                      # element spacing along x, m
    dy: float                      # element spacing along y, m
    panel_offsets: np.ndarray      # (panels, 3) panel-center displacement, m
    platform_position: np.ndarray  # (3,) m
    element_positions: np.ndarray  # (n_elements, 3) m
    feed_positions: np.ndarray     # (n_feeds, 3) m
    element_index: np.ndarray      # (n_elements, 3) int: panel, ix, iy
    feed_index: np.ndarray         # (n_feeds, 2) int: panel, feed slot

    @property
    def n_elements(self) -> int:
        return self.element_positions.shape[0]

    @property
    def n_feeds(self) -> int:
        return self.feed_positions.shape[0]

    @property
    def center(self) -> np.ndarray:
        """Phase center of the surface: mean of the element positions."""
        return self.element_positions.mean(axis=0)


def build_array(panels, elements_x, elements_y, dx, dy, feeds_per_panel=8,
                tiling_axis="x", platform_position=(0.0, 0.0, 1000.0),
                panel_offsets=None) -> ArrayGeometry:
    """Build the element/feed layout of a multi-panel surface.

    Panels are tiled edge to edge along ``tiling_axis`` with no gap between
    panel cells, so the element grid continues across panel boundaries at the
    configured spacing. Feeds sit on a line through each panel center, in a
    layer FEED_LAYER_DEPTH below the radiating plane, uniformly spaced across
    the panel's x extent. ``panel_offsets`` overrides the default tiling.
    """
    for name, value in (("panels", panels), ("elements_x", elements_x),
                        ("elements_y", elements_y), ("feeds_per_panel", feeds_per_panel)):
        if int(value) != value or int(value) < 1:
            raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    panels, elements_x, elements_y = int(panels), int(elements_x), int(elements_y)
    feeds_per_panel = int(feeds_per_panel)
    if dx <= 0 or dy <= 0:
        raise ConfigError(f"element spacings must be > 0, got dx={dx}, dy={dy}")
    if tiling_axis not in _AXES:
        raise ConfigError(f"tiling_axis must be one of {sorted(_AXES)}, got {tiling_axis!r}")

    platform = np.asarray(platform_position, dtype=float).reshape(3)

    if panel_offsets is None:
        axis = _AXES[tiling_axis]
        pitch = elements_x * dx if axis == 0 else elements_y * dy
        offsets = np.zeros((panels, 3))
        offsets[:, axis] = (np.arange(panels) - (panels - 1) / 2.0) * pitch
    else:
        offsets = np.asarray(panel_offsets, dtype=float)
        if offsets.shape != (panels, 3):
            raise ConfigError(
                f"panel_offsets must have shape ({panels}, 3), got {offsets.shape}")

    lx = (np.arange(elements_x) - (elements_x - 1) / 2.0) * dx
    ly = (np.arange(elements_y) - (elements_y - 1) / 2.0) * dy
    gx, gy = np.meshgrid(lx, ly, indexing="ij")
    local = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)])
    ix_grid, iy_grid = np.meshgrid(np.arange(elements_x), np.arange(elements_y),
                                   indexing="ij")

    if elements_x > 1:
        fx = np.linspace(lx[0], lx[-1], feeds_per_panel)
    else:
        fx = np.zeros(feeds_per_panel)
    feed_local = np.column_stack([fx, np.zeros(feeds_per_panel),
                                  np.full(feeds_per_panel, -FEED_LAYER_DEPTH)])

    elements, feeds, eindex, findex = [], [], [], []
    for p in range(panels):
        origin = platform + offsets[p]
        elements.append(origin + local)
        feeds.append(origin + feed_local)
        eindex.append(np.column_stack([np.full(local.shape[0], p),
                                       ix_grid.ravel(), iy_grid.ravel()]))
        findex.append(np.column_stack([np.full(feeds_per_panel, p),
                                       np.arange(feeds_per_panel)]))
    element_positions = np.vstack(elements)
    feed_positions = np.vstack(feeds)

    rounded = np.round(element_positions, 12)
    if np.unique(rounded, axis=0).shape[0] != element_positions.shape[0]:
        raise ConfigError("panel layout places two elements at the same position")

    return ArrayGeometry(
        panels=panels, elements_x=elements_x, elements_y=elements_y,
        dx=float(dx), dy=float(dy),
        panel_offsets=_frozen(offsets),
        platform_position=_frozen(platform),
        element_positions=_frozen(element_positions),
        feed_positions=_frozen(feed_positions),
        element_index=_frozen(np.vstack(eindex), dtype=int),
        feed_index=_frozen(np.vstack(findex), dtype=int),
    )


def aperture_of(geometry: ArrayGeometry) -> float:
    """Aperture of the surface: largest distance between any two element centers."""
    if geometry.n_elements < 2:
        warnings.warn("single-element array has zero aperture", stacklevel=2)
        return 0.0
    return float(pdist(geometry.element_positions).max())


def rayleigh_distance(aperture: float, frequency: float) -> float:
    """Near-field/far-field boundary 2 D^2 f / c for aperture D at the given frequency."""
    if aperture <= 0:
        raise ConfigError(f"aperture must be > 0, got {aperture}")
    if frequency <= 0:
        raise ConfigError(f"frequency must be > 0, got {frequency}")
    return 2.0 * aperture * aperture * frequency / SPEED_OF_LIGHT


@dataclass(frozen=True, eq=False)
class UserSet:
    """Ground users served by the platform."""

    positions: np.ndarray       # (K, 3) m, on the ground plane z = 0
    azimuths_deg: np.ndarray    # (K,)
    elevations_deg: np.ndarray  # (K,)
    data_bits: np.ndarray       # (K,) task size per user

    @property
    def count(self) -> int:
        return self.positions.shape[0]


def place_users(count, azimuth_range_deg=(-50.0, 50.0), elevation_deg=0.0,
                platform_position=(0.0, 0.0, 1000.0), ground_range_m=None,
                data_bits=50_000.0, seed=None) -> UserSet:
    """Sample users on the ground plane at platform-relative angles.

    Azimuth is the steering angle within the vertical plane through the
    array's x axis; elevation tilts the direction toward +y. Azimuths are
    drawn uniformly over ``azimuth_range_deg``. By default each user sits
    where its ray from the platform meets the ground; ``ground_range_m``
    instead fixes the horizontal distance from the sub-platform point while
    keeping the ray's ground bearing.
    """
    if int(count) != count or int(count) < 1:
        raise ConfigError(f"user count must be a positive integer, got {count!r}")
    count = int(count)
    lo, hi = float(azimuth_range_deg[0]), float(azimuth_range_deg[1])
    if lo > hi:
        raise ConfigError(f"azimuth range must be ordered, got ({lo}, {hi})")
    if max(abs(lo), abs(hi)) >= 90.0 or abs(elevation_deg) >= 90.0:
        raise ConfigError("azimuth and elevation must lie strictly within (-90, 90) deg")
    platform = np.asarray(platform_position, dtype=float).reshape(3)
    if platform[2] <= 0:
        raise ConfigError("platform must be above the ground plane (z > 0)")

    rng = np.random.default_rng(seed)
    az = rng.uniform(lo, hi, count)
    el = np.full(count, float(elevation_deg))

    az_r, el_r = np.radians(az), np.radians(el)
    ca, sa = np.cos(az_r), np.sin(az_r)
    ce, se = np.cos(el_r), np.sin(el_r)
    directions = np.column_stack([ce * sa, se, -ce * ca])

    if ground_range_m is None:
        t = platform[2] / (ce * ca)
        positions = platform + t[:, None] * directions
        positions[:, 2] = 0.0  # exact ground plane, free of rounding residue
    else:
        g = float(ground_range_m)
        if g < 0:
            raise ConfigError(f"ground_range_m must be >= 0, got {g}")
        horiz = directions[:, :2]
        norms = np.linalg.norm(horiz, axis=1)
        bearing = np.divide(horiz, norms[:, None], out=np.zeros_like(horiz),
                            where=norms[:, None] > 1e-12)
        positions = np.zeros((count, 3))
        positions[:, :2] = platform[:2] + g * bearing

    data = np.broadcast_to(np.asarray(data_bits, dtype=float), (count,)).copy()
    if np.any(data <= 0):
        raise ConfigError("data_bits must be > 0 for every user")

    return UserSet(
        positions=_frozen(positions),
        azimuths_deg=_frozen(az),
        elevations_deg=_frozen(el),
        data_bits=_frozen(data),
    )

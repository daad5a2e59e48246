"""Amplitude-hologram synthesis on the radiating surface.

The chain: each feed launches a guided reference wave under the surface; for
every target a conjugate-phase object wave is formed; their interference
gives a per-element amplitude map in [0, 1]; per-target maps are superimposed,
min-max normalized, and thresholded to a 1-bit on/off pattern; the pattern
combined with element-to-feed phase delays yields the element-by-feed
excitation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError
from .channel import (channel_auto, channel_nusw, channel_upw, channel_usw,
                      direction_vector, wavelength)
from .geometry import ArrayGeometry

_FLAT_SPAN = 1e-15


@dataclass(frozen=True, eq=False)
class Hologram:
    """Continuous and binarized per-element amplitude pattern."""

    continuous: np.ndarray  # (n_elements,) in [0, 1]
    binary: np.ndarray      # (n_elements,) in {0, 1}
    threshold: float
    target_count: int

    @property
    def active_count(self) -> int:
        return int(self.binary.sum())


def reference_wave(geometry: ArrayGeometry, feed_index: int, frequency: float,
                   waveguide_index: float) -> np.ndarray:
    """Guided wave phase profile launched by one feed (unit modulus).

    The wavenumber under the surface is scaled by the waveguide index, which
    also keeps the unmodulated surface wave from radiating.
    """
    feed = geometry.feed_positions[feed_index]
    d = np.linalg.norm(geometry.element_positions - feed, axis=1)
    k_s = 2.0 * np.pi * waveguide_index / wavelength(frequency)
    return np.exp(-1j * k_s * d)


def surface_reference_wave(geometry: ArrayGeometry, frequency: float,
                           waveguide_index: float, feed_weights=None) -> np.ndarray:
    """Phase profile of the combined surface wave from all feeds (unit modulus).

    The weighted feed contributions are summed and only the resulting phase is
    kept, so the output can interfere against a unit-modulus object wave.
    """
    n_feeds = geometry.n_feeds
    if feed_weights is None:
        feed_weights = np.full(n_feeds, 1.0 / np.sqrt(n_feeds))
    feed_weights = np.asarray(feed_weights, dtype=complex)
    if feed_weights.shape != (n_feeds,):
        raise ShapeError(f"feed_weights must have length {n_feeds}")
    d = np.linalg.norm(geometry.element_positions[:, None, :]
                       - geometry.feed_positions[None, :, :], axis=2)
    k_s = 2.0 * np.pi * waveguide_index / wavelength(frequency)
    combined = np.exp(-1j * k_s * d) @ feed_weights
    return np.exp(1j * np.angle(combined))


def object_wave(geometry: ArrayGeometry, user_point, frequency: float,
                model: str = "auto", amplitude_tolerance: float = 0.01) -> np.ndarray:
    """Conjugate-phase target wave toward a point: phase is the negated
    channel phase of the chosen wavefront model, amplitude is one."""
    if model == "auto":
        row = channel_auto(geometry, user_point, frequency, amplitude_tolerance).gains
    elif model in ("upw", "UPW"):
        from .channel import _element_distances, angles_of

        point = np.asarray(user_point, dtype=float).reshape(3)
        az, el = angles_of(point - geometry.center)
        ref = float(_element_distances(geometry, point).mean())
        row = channel_upw(geometry, az, el, frequency, ref)
    elif model in ("usw", "USW"):
        row = channel_usw(geometry, user_point, frequency)
    elif model in ("nusw", "NUSW"):
        row = channel_nusw(geometry, user_point, frequency)
    else:
        raise ConfigError(f"unknown channel model {model!r}")
    return np.exp(-1j * np.angle(row))


def object_wave_upw(geometry: ArrayGeometry, azimuth_deg: float,
                    elevation_deg: float, frequency: float) -> np.ndarray:
    """Conjugate-phase planar target wave toward a far-field direction."""
    row = channel_upw(geometry, azimuth_deg, elevation_deg, frequency, 1.0)
    return np.exp(-1j * np.angle(row))


def interference_pattern(object_wave, reference_wave) -> np.ndarray:
    """Cosine of the phase difference between the waves, mapped onto [0, 1]."""
    obj = np.asarray(object_wave, dtype=complex)
    ref = np.asarray(reference_wave, dtype=complex)
    if obj.shape != ref.shape:
        raise ShapeError(f"wave lengths differ: {obj.shape} vs {ref.shape}")
    for name, wave in (("object", obj), ("reference", ref)):
        if np.max(np.abs(np.abs(wave) - 1.0)) > 1e-6:
            raise ValueError(f"{name} wave must be unit modulus")
    pattern = (np.real(obj * np.conj(ref)) + 1.0) / 2.0
    return np.clip(pattern, 0.0, 1.0)


def superimpose(patterns, weights=None) -> np.ndarray:
    """Weighted mean of per-target patterns, min-max normalized to span [0, 1].

    A flat mean (no spread across the surface) is returned unchanged.
    """
    patterns = [np.asarray(p, dtype=float) for p in patterns]
    if not patterns:
        raise ValueError("at least one pattern is required")
    shape = patterns[0].shape
    if any(p.shape != shape for p in patterns):
        raise ShapeError("patterns must all have the same length")
    if weights is None:
        weights = np.full(len(patterns), 1.0 / len(patterns))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(patterns),):
        raise ShapeError("weights must match the number of patterns")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be nonnegative and sum to 1")

    mixed = np.einsum("k,k...->...", weights, np.stack(patterns))
    lo, hi = float(mixed.min()), float(mixed.max())
    if hi - lo < _FLAT_SPAN:
        return mixed
    return (mixed - lo) / (hi - lo)


def binarize(pattern, threshold: float = 0.5) -> np.ndarray:
    """Threshold a pattern in [0, 1] to {0, 1}; ties map to 1."""
    pattern = np.asarray(pattern, dtype=float)
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold must lie in [0, 1], got {threshold}")
    if pattern.size and (pattern.min() < -1e-9 or pattern.max() > 1.0 + 1e-9):
        raise ValueError("pattern values must lie in [0, 1]")
    return (pattern >= threshold).astype(np.uint8)


def hologram_from_patterns(patterns, weights=None, threshold: float = 0.5) -> Hologram:
    """Superimpose per-target patterns and binarize into a Hologram."""
    continuous = superimpose(patterns, weights)
    binary = binarize(continuous, threshold)
    continuous.flags.writeable = False
    binary.flags.writeable = False
    return Hologram(continuous=continuous, binary=binary,
                    threshold=float(threshold), target_count=len(patterns))


@dataclass(frozen=True, eq=False)
class BeamformingMatrix:
    """Element-by-feed excitation: hologram amplitude times feed phase delay."""

    entries: np.ndarray  # (n_elements, n_feeds) complex
    source_hologram: Hologram
    waveguide_index: float
    mode: str


def beamforming_matrix(hologram: Hologram, geometry: ArrayGeometry,
                       frequency: float, waveguide_index: float,
                       mode: str = "binary") -> BeamformingMatrix:
    """Combine the hologram with element-to-feed phase delays."""
    if mode == "binary":
        amplitude = hologram.binary.astype(float)
    elif mode == "continuous":
        amplitude = hologram.continuous
    else:
        raise ConfigError(f"mode must be 'binary' or 'continuous', got {mode!r}")
    if amplitude.shape[0] != geometry.n_elements:
        raise ShapeError(
            f"hologram has {amplitude.shape[0]} entries for {geometry.n_elements} elements")
    d = np.linalg.norm(geometry.element_positions[:, None, :]
                       - geometry.feed_positions[None, :, :], axis=2)
    k_s = 2.0 * np.pi * waveguide_index / wavelength(frequency)
    entries = amplitude[:, None] * np.exp(-1j * k_s * d)
    entries.flags.writeable = False
    return BeamformingMatrix(entries=entries, source_hologram=hologram,
                             waveguide_index=float(waveguide_index), mode=mode)


@dataclass(frozen=True, eq=False)
class RadiationPattern:
    """Normalized far-field power pattern over an azimuth grid."""

    angles_deg: np.ndarray
    gains_db: np.ndarray   # peak at 0 dB; -inf where no power radiates
    degenerate: bool       # True when the excitation radiates nothing at all

    @property
    def argmax_deg(self) -> float:
        if self.degenerate:
            return float("nan")
        return float(self.angles_deg[int(np.argmax(self.gains_db))])


def radiation_pattern(matrix: BeamformingMatrix, feed_weights, geometry: ArrayGeometry,
                      frequency: float, angle_grid_deg,
                      elevation_deg: float = 0.0) -> RadiationPattern:
    """Far-field power pattern of the excited surface, normalized to 0 dB peak."""
    angles = np.asarray(angle_grid_deg, dtype=float).ravel()
    if angles.size == 0:
        raise ValueError("angle grid must not be empty")
    feed_weights = np.asarray(feed_weights, dtype=complex)
    if feed_weights.shape != (matrix.entries.shape[1],):
        raise ShapeError(f"feed_weights must have length {matrix.entries.shape[1]}")

    element_drive = matrix.entries @ feed_weights
    offsets = geometry.element_positions - geometry.center
    directions = np.stack([direction_vector(a, elevation_deg) for a in angles])
    k = 2.0 * np.pi / wavelength(frequency)
    steering = np.exp(1j * k * (directions @ offsets.T))
    power = np.abs(steering @ element_drive) ** 2

    peak = float(power.max())
    if peak <= 0.0:
        gains = np.full(angles.shape, -np.inf)
        degenerate = True
    else:
        with np.errstate(divide="ignore"):
            gains = 10.0 * np.log10(power / peak)
        degenerate = False
    angles.flags.writeable = False
    gains.flags.writeable = False
    return RadiationPattern(angles_deg=angles, gains_db=gains, degenerate=degenerate)

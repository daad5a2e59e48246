"""End-to-end assembly of a configured scenario.

Builds the geometry and users, synthesizes channels, constructs the
multi-target hologram and excitation matrix, and exposes the feed-domain
quantities the link layer and the efficiency optimizer consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, channel_matrix
from .energyopt import EEProblem, PowerModel
from .geometry import ArrayGeometry, UserSet
from .holography import (BeamformingMatrix, Hologram, RadiationPattern,
                         beamforming_matrix, hologram_from_patterns,
                         interference_pattern, object_wave, radiation_pattern,
                         surface_reference_wave)
from .link import LinkState, effective_channel, precoder, precoder_directions, rates, sinr


@dataclass(frozen=True, eq=False)
class SystemState:
    """Everything derived from a scenario that is independent of circuit power."""

    scenario: object
    geometry: ArrayGeometry
    users: UserSet
    channel: ChannelMatrix
    reference: np.ndarray        # composite surface wave phase profile
    hologram: Hologram
    matrix: BeamformingMatrix
    effective: np.ndarray        # (users, feeds)
    directions: np.ndarray       # (feeds, users) unit-norm precoding columns
    cross_gains: np.ndarray      # (users, users) squared stream gains


def build_system(scenario) -> SystemState:
    geometry = scenario.build_geometry()
    users = scenario.build_users()
    radio = scenario.radio
    freq = radio.carrier_frequency_hz

    H = channel_matrix(geometry, users.positions, freq,
                       model=scenario.channel.model,
                       amplitude_tolerance=scenario.channel.amplitude_tolerance)
    reference = surface_reference_wave(geometry, freq, radio.waveguide_index)
    patterns = [
        interference_pattern(
            object_wave(geometry, position, freq, model=scenario.channel.model,
                        amplitude_tolerance=scenario.channel.amplitude_tolerance),
            reference)
        for position in users.positions
    ]
    hologram = hologram_from_patterns(patterns, threshold=scenario.hologram.threshold)
    matrix = beamforming_matrix(hologram, geometry, freq, radio.waveguide_index,
                                mode=scenario.hologram.mode)
    G = effective_channel(H, matrix)
    directions = precoder_directions(G, scenario.link.precoder,
                                     scenario.link.condition_cap)
    cross_gains = np.abs(G @ directions) ** 2
    return SystemState(scenario=scenario, geometry=geometry, users=users,
                       channel=H, reference=reference, hologram=hologram,
                       matrix=matrix, effective=G, directions=directions,
                       cross_gains=cross_gains)


def ee_problem(system: SystemState, circuit_power_w: float) -> EEProblem:
    """Efficiency subproblem for one circuit-power operating point."""
    scenario = system.scenario
    radio = scenario.radio
    model = PowerModel(
        tx_power_w=radio.tx_power_w,
        pa_efficiency=radio.pa_efficiency,
        circuit_power_w=float(circuit_power_w),
        per_element_power_w=scenario.power.per_element_w,
        active_element_count=system.hologram.active_count,
    )
    floors = np.full(system.users.count, scenario.optimizer.min_rate_bps)
    return EEProblem(cross_gains=system.cross_gains,
                     tx_power_w=radio.tx_power_w,
                     noise_w=radio.noise_power_w,
                     bandwidth_hz=radio.bandwidth_hz,
                     data_bits=system.users.data_bits,
                     power_model=model,
                     min_rates=floors)


def link_state(system: SystemState, shares=None) -> LinkState:
    """Solve the digital stage at a given power split (uniform by default)."""
    scenario = system.scenario
    radio = scenario.radio
    V = precoder(system.effective, scenario.link.precoder, 1.0, shares,
                 scenario.link.condition_cap)
    s = sinr(system.effective, V, radio.tx_power_w, radio.noise_power_w)
    return LinkState(effective_channel=system.effective, precoder=V,
                     per_user_sinr=s, per_user_rate=rates(s, radio.bandwidth_hz))


def system_radiation_pattern(system: SystemState, angle_grid_deg) -> RadiationPattern:
    """Pattern of the scenario hologram under uniform feed weighting."""
    n_feeds = system.geometry.n_feeds
    weights = np.full(n_feeds, 1.0 / np.sqrt(n_feeds))
    return radiation_pattern(system.matrix, weights, system.geometry,
                             system.scenario.radio.carrier_frequency_hz,
                             angle_grid_deg)

"""Beamforming and energy-efficiency simulator for a holographic-surface
aerial base station: multi-panel array geometry, planar/spherical wavefront
channels, amplitude-hologram synthesis, feed-domain precoding, and
task-based bits-per-joule optimization."""

__version__ = "0.1.0"

from .channel import (NUSW, UPW, USW, AutoChannel, ChannelMatrix, RadioConfig,
                      RegionClassification, channel_auto, channel_matrix,
                      channel_nusw, channel_upw, channel_usw, classify_region,
                      free_space_path_loss_db, noise_power,
                      normalized_correlation, point_source_gains,
                      uniform_power_distance)
from .energyopt import (DinkelbachResult, EEProblem, EESweepReport,
                        GridOracleResult, PowerModel, ee_sweep, grid_oracle,
                        optimize_ee_dinkelbach, task_energy_ee, total_power)
from .errors import (ConfigError, InfeasibleAllocationError,
                     InfeasibleTaskError, RankDeficiencyError, ShapeError,
                     SingularGeometryError)
from .geometry import (SPEED_OF_LIGHT, ArrayGeometry, UserSet, aperture_of,
                       build_array, place_users, rayleigh_distance)
from .holography import (BeamformingMatrix, Hologram, RadiationPattern,
                         beamforming_matrix, binarize, hologram_from_patterns,
                         interference_pattern, object_wave, object_wave_upw,
                         radiation_pattern, reference_wave, superimpose,
                         surface_reference_wave)
from .link import (LinkState, baseline_uav_only, effective_channel, precoder,
                   precoder_directions, rates, sinr)
from .pipeline import (SystemState, build_system, ee_problem, link_state,
                       system_radiation_pattern)
from .scenario import Scenario, list_presets, load_scenario, save_scenario

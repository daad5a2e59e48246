"""Power accounting, the task-based bits-per-joule metric, ratio-maximizing
power allocation, and an exhaustive validation oracle.

Energy efficiency is task-based: each user must receive a fixed number of
bits; a user's transfer takes data/rate seconds at the full system power, and
the efficiency is total bits over total energy. The allocator maximizes the
ratio N(x)/D(x), with N the rate-weighted task throughput and D the consumed
power, by the classic iterative scheme for fractional objectives: solve
max N(x) - lambda D(x) on the simplex of power shares, update lambda to the
achieved ratio, repeat.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, InfeasibleAllocationError, InfeasibleTaskError


@dataclass(frozen=True)
class PowerModel:
    """Consumed-power decomposition of one system configuration."""

    tx_power_w: float
    pa_efficiency: float
    circuit_power_w: float
    per_element_power_w: float = 0.0
    active_element_count: int = 0

    def __post_init__(self):
        if self.tx_power_w < 0:
            raise ConfigError("tx_power_w must be >= 0")
        if not 0.0 < self.pa_efficiency <= 1.0:
            raise ConfigError("pa_efficiency must lie in (0, 1]")
        if self.circuit_power_w < 0 or self.per_element_power_w < 0:
            raise ConfigError("circuit and per-element powers must be >= 0")
        if self.active_element_count < 0:
            raise ConfigError("active_element_count must be >= 0")


def total_power(model: PowerModel) -> float:
    """Amplifier draw plus circuit power plus element control overhead, watts."""
    return (model.tx_power_w / model.pa_efficiency
            + model.circuit_power_w
            + model.per_element_power_w * model.active_element_count)


def task_energy_ee(rates, data_bits, power_w: float):
    """Per-user task energies and overall bits-per-joule efficiency.

    Each user's transfer of ``data_bits`` at its rate takes data/rate seconds
    at ``power_w``; efficiency is total bits over total energy.
    """
    r = np.asarray(rates, dtype=float)
    d = np.asarray(data_bits, dtype=float)
    if r.shape != d.shape:
        raise ConfigError("rates and data_bits must have the same length")
    if power_w <= 0:
        raise ConfigError("power must be > 0")
    pending = d > 0
    dead = pending & (r <= 0)
    if np.any(dead):
        k = int(np.argmax(dead))
        raise InfeasibleTaskError(
            f"user {k} has {d[k]:.0f} bits pending but zero rate")
    times = np.zeros_like(d)
    times[pending] = d[pending] / r[pending]
    energies = power_w * times
    total_energy = float(energies.sum())
    if total_energy <= 0:
        raise ConfigError("no user carries data; efficiency is undefined")
    return energies, float(d.sum() / total_energy)


@dataclass(frozen=True, eq=False)
class EEProblem:
    """Energy-efficiency maximization over per-user power shares.

    ``cross_gains[k, j]`` is the squared effective gain of stream j at user k
    for unit-norm precoding columns; the share vector scales stream powers.
    """

    cross_gains: np.ndarray   # (K, K)
    tx_power_w: float
    noise_w: float
    bandwidth_hz: float
    data_bits: np.ndarray     # (K,)
    power_model: PowerModel
    min_rates: np.ndarray = None  # (K,) bit/s floors; zeros when omitted

    def __post_init__(self):
        C = np.asarray(self.cross_gains, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ConfigError("cross_gains must be square")
        object.__setattr__(self, "cross_gains", C)
        object.__setattr__(self, "data_bits", np.asarray(self.data_bits, dtype=float))
        floors = np.zeros(C.shape[0]) if self.min_rates is None \
            else np.asarray(self.min_rates, dtype=float)
        object.__setattr__(self, "min_rates", floors)

    @property
    def n_users(self) -> int:
        return self.cross_gains.shape[0]

    def sinr_of(self, shares) -> np.ndarray:
        p = np.asarray(shares, dtype=float)
        C = self.cross_gains
        signal = self.tx_power_w * p * np.diag(C)
        off = C - np.diag(np.diag(C))
        interference = self.tx_power_w * (off @ p)
        return signal / (interference + self.noise_w)

    def rates_of(self, shares) -> np.ndarray:
        return self.bandwidth_hz * np.log2(1.0 + self.sinr_of(shares))

    def total_power_of(self, shares) -> float:
        # power as allocated; shares partition the configured transmit power
        used_tx = self.tx_power_w * float(np.sum(shares))
        return total_power(replace(self.power_model, tx_power_w=used_tx))

    def feasible(self, shares) -> bool:
        p = np.asarray(shares, dtype=float)
        if p.shape != (self.n_users,) or np.any(p < -1e-12):
            return False
        if abs(p.sum() - 1.0) > 1e-9:
            return False
        r = self.rates_of(p)
        if np.any((self.data_bits > 0) & (r <= 0)):
            return False
        return bool(np.all(r >= self.min_rates - 1e-9))

    def throughput_of(self, shares) -> float:
        """Rate-weighted task throughput: total bits over total task time."""
        r = self.rates_of(shares)
        pending = self.data_bits > 0
        times = self.data_bits[pending] / r[pending]
        return float(self.data_bits.sum() / times.sum())

    def ee_of(self, shares) -> float:
        return self.throughput_of(shares) / self.total_power_of(shares)


@dataclass(frozen=True)
class DinkelbachResult:
    shares: np.ndarray
    ee: float            # bit/J
    iterations: int
    lambdas: tuple       # ratio after each outer iteration, non-decreasing
    residual: float      # |N - lambda D| at the last iteration
    converged: bool


def _coordinate_ascent(problem: EEProblem, shares, lam: float,
                       step0: float = 0.25, step_min: float = 1e-13) -> np.ndarray:
    """Maximize N(x) - lam D(x) by pairwise share transfers with halving steps."""
    x = np.asarray(shares, dtype=float).copy()

    def score(p):
        return problem.throughput_of(p) - lam * problem.total_power_of(p)

    best = score(x)
    step = step0
    K = x.shape[0]
    while step >= step_min:
        improved = False
        for i in range(K):
            for j in range(K):
                if i == j or x[j] <= 0:
                    continue
                delta = min(step, x[j])
                candidate = x.copy()
                candidate[i] += delta
                candidate[j] -= delta
                if not problem.feasible(candidate):
                    continue
                value = score(candidate)
                if value > best:
                    best = value
                    x = candidate
                    improved = True
        if not improved:
            step /= 2.0
    return x


def optimize_ee_dinkelbach(problem: EEProblem, tol: float = 1e-9,
                           max_iterations: int = 100) -> DinkelbachResult:
    """Maximize bits-per-joule over the power-share simplex.

    Raises InfeasibleAllocationError when even uniform shares violate the
    rate floors. On hitting the iteration cap, returns the best point found
    with ``converged`` set to False.
    """
    K = problem.n_users
    x = np.full(K, 1.0 / K)
    if not problem.feasible(x):
        r = problem.rates_of(x)
        raise InfeasibleAllocationError(
            "uniform power shares violate the rate floors: "
            f"rates {np.array2string(r, precision=3)} bit/s vs floors "
            f"{np.array2string(problem.min_rates, precision=3)} bit/s")

    num = problem.throughput_of(x)
    den = problem.total_power_of(x)
    lam = num / den
    lambdas = [lam]
    residual = float("inf")
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        x = _coordinate_ascent(problem, x, lam)
        new_num = problem.throughput_of(x)
        new_den = problem.total_power_of(x)
        # |N - lambda D| evaluated as a ratio so an exact fixed point gives 0
        residual = abs(new_num - num * (new_den / den))
        num, den = new_num, new_den
        lam = num / den
        lambdas.append(lam)
        if residual < tol * den:
            converged = True
            break

    return DinkelbachResult(shares=x, ee=lam, iterations=iterations,
                            lambdas=tuple(lambdas), residual=residual,
                            converged=converged)


@dataclass(frozen=True)
class GridOracleResult:
    ee: float
    shares: np.ndarray


def _simplex_grid(n_users: int, resolution: int) -> np.ndarray:
    """All share vectors with components on a uniform grid summing to 1."""
    m = resolution - 1

    def compositions(k, total):
        if k == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for tail in compositions(k - 1, total - head):
                yield (head,) + tail

    grid = np.array(list(compositions(n_users, m)), dtype=float)
    return grid / m


def grid_oracle(problem: EEProblem, grid_resolution: int = 100) -> GridOracleResult:
    """Exhaustive efficiency search over the discretized share simplex."""
    if grid_resolution < 2:
        raise ConfigError("grid_resolution must be >= 2")
    P = _simplex_grid(problem.n_users, grid_resolution)
    C = problem.cross_gains
    diag = np.diag(C)
    off = C - np.diag(diag)

    signal = problem.tx_power_w * P * diag[None, :]
    interference = problem.tx_power_w * (P @ off.T)
    snr = signal / (interference + problem.noise_w)
    r = problem.bandwidth_hz * np.log2(1.0 + snr)

    pending = problem.data_bits > 0
    ok = np.all(r >= problem.min_rates[None, :] - 1e-9, axis=1)
    ok &= np.all((r > 0) | ~pending[None, :], axis=1)
    if not np.any(ok):
        raise InfeasibleAllocationError("no grid point satisfies the rate floors")

    with np.errstate(divide="ignore", invalid="ignore"):
        times = np.where(pending[None, :], problem.data_bits[None, :] / r, 0.0)
    power = problem.total_power_of(np.full(problem.n_users, 1.0 / problem.n_users))
    ee = problem.data_bits.sum() / (power * times.sum(axis=1))
    ee[~ok] = -np.inf
    best = int(np.argmax(ee))
    return GridOracleResult(ee=float(ee[best]), shares=P[best])


@dataclass(frozen=True, eq=False)
class EESweepReport:
    """Per-circuit-power efficiencies of the surface system and the baseline."""

    circuit_powers_w: tuple
    ee_rhs_bpj: tuple
    ee_baseline_bpj: tuple
    per_user_rates: tuple   # tuple of per-user bit/s tuples, one per sweep point
    energies_j: tuple       # total task energy of the surface system
    iterations: tuple
    converged: tuple
    config_digest: str


def ee_sweep(scenario, circuit_powers=None, threads: int = 1) -> EESweepReport:
    """Optimized efficiency of the surface system vs the single-antenna
    baseline across a circuit-power sweep with identical radio parameters."""
    from . import pipeline  # deferred: pipeline composes this module's types
    from .channel import point_source_gains
    from .link import baseline_uav_only

    powers = tuple(float(p) for p in
                   (scenario.sweep.circuit_powers_w if circuit_powers is None
                    else circuit_powers))
    if not powers:
        raise ConfigError("sweep list must not be empty")
    if any(b <= a for a, b in zip(powers, powers[1:])):
        raise ConfigError("sweep circuit powers must be strictly increasing")

    system = pipeline.build_system(scenario)
    radio = scenario.radio
    baseline_gains = point_source_gains(system.geometry.platform_position,
                                        system.users.positions,
                                        radio.carrier_frequency_hz)
    data = system.users.data_bits

    def run_point(pc):
        try:
            problem = pipeline.ee_problem(system, pc)
            result = optimize_ee_dinkelbach(problem,
                                            tol=scenario.optimizer.dinkelbach_tol,
                                            max_iterations=scenario.optimizer.max_iterations)
            user_rates = problem.rates_of(result.shares)
            energies, ee_rhs = task_energy_ee(user_rates, data,
                                              total_power(problem.power_model))
            base_model = PowerModel(radio.tx_power_w, radio.pa_efficiency, pc)
            base_rates = baseline_uav_only(baseline_gains, radio.tx_power_w,
                                           radio.noise_power_w, radio.bandwidth_hz)
            _, ee_base = task_energy_ee(base_rates, data, total_power(base_model))
            return (ee_rhs, ee_base, tuple(user_rates), float(energies.sum()),
                    result.iterations, result.converged)
        except Exception:
            nan_rates = tuple(float("nan") for _ in range(len(data)))
            return (float("nan"), float("nan"), nan_rates, float("nan"), 0, False)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_point, powers))
    else:
        rows = [run_point(pc) for pc in powers]

    return EESweepReport(
        circuit_powers_w=powers,
        ee_rhs_bpj=tuple(row[0] for row in rows),
        ee_baseline_bpj=tuple(row[1] for row in rows),
        per_user_rates=tuple(row[2] for row in rows),
        energies_j=tuple(row[3] for row in rows),
        iterations=tuple(row[4] for row in rows),
        converged=tuple(row[5] for row in rows),
        config_digest=scenario.digest,
    )

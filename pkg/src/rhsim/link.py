"""Feed-domain effective channels, digital precoding, SINR, and rates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, RankDeficiencyError, ShapeError

MATCHED_FILTER = "matched-filter"
ZERO_FORCING = "zero-forcing"

_PRECODERS = {
    MATCHED_FILTER: MATCHED_FILTER, "mf": MATCHED_FILTER,
    ZERO_FORCING: ZERO_FORCING, "zf": ZERO_FORCING,
}


def _as_matrix(obj, attr):
    return np.asarray(getattr(obj, attr, obj), dtype=complex)


def effective_channel(channel, matrix) -> np.ndarray:
    """Compose per-element channels with the surface excitation: G = H M."""
    H = _as_matrix(channel, "gains")
    M = _as_matrix(matrix, "entries")
    if H.ndim != 2 or M.ndim != 2 or H.shape[1] != M.shape[0]:
        raise ShapeError(f"cannot compose channel {H.shape} with matrix {M.shape}")
    return H @ M


def _most_correlated_pair(G):
    norms = np.linalg.norm(G, axis=1)
    K = G.shape[0]
    best = (0, 1, 0.0)
    for i in range(K):
        for j in range(i + 1, K):
            if norms[i] == 0 or norms[j] == 0:
                corr = 1.0
            else:
                corr = abs(np.vdot(G[i], G[j])) / (norms[i] * norms[j])
            if corr >= best[2]:
                best = (i, j, corr)
    return best


def precoder_directions(G, kind: str = ZERO_FORCING,
                        condition_cap: float = 1e12) -> np.ndarray:
    """Unit-norm precoding columns (feeds x users) for the effective channel."""
    G = np.asarray(G, dtype=complex)
    if G.ndim != 2:
        raise ShapeError("effective channel must be a 2-D matrix")
    try:
        kind = _PRECODERS[kind]
    except KeyError:
        raise ConfigError(f"unknown precoder kind {kind!r}") from None

    if kind == MATCHED_FILTER:
        W = G.conj().T
    else:
        gram = G @ G.conj().T
        cond = np.linalg.cond(gram)
        if not np.isfinite(cond) or cond > condition_cap:
            i, j, corr = _most_correlated_pair(G)
            raise RankDeficiencyError(
                f"effective channel is rank deficient (cond {cond:.3e}); "
                f"users {i} and {j} are nearly collinear (|corr| = {corr:.6f})")
        W = G.conj().T @ np.linalg.inv(gram)

    norms = np.linalg.norm(W, axis=0)
    if np.any(norms == 0):
        k = int(np.argmin(norms))
        raise RankDeficiencyError(f"user {k} has a zero effective channel")
    return W / norms


def precoder(G, kind: str = ZERO_FORCING, total_power_norm: float = 1.0,
             shares=None, condition_cap: float = 1e12) -> np.ndarray:
    """Precoding matrix scaled so the total transmit power equals
    ``total_power_norm`` exactly; ``shares`` splits it across users."""
    directions = precoder_directions(G, kind, condition_cap)
    K = directions.shape[1]
    if shares is None:
        shares = np.full(K, 1.0 / K)
    shares = np.asarray(shares, dtype=float)
    if shares.shape != (K,):
        raise ShapeError(f"shares must have length {K}")
    if np.any(shares < 0) or abs(shares.sum() - 1.0) > 1e-9:
        raise ConfigError("shares must be nonnegative and sum to 1")
    if total_power_norm <= 0:
        raise ConfigError("total_power_norm must be > 0")
    return directions * np.sqrt(total_power_norm * shares)[None, :]


def sinr(G, V, tx_power_w: float, noise_w: float) -> np.ndarray:
    """Per-user SINR for effective channel G and precoder V."""
    G = np.asarray(G, dtype=complex)
    V = np.asarray(V, dtype=complex)
    if G.shape[1] != V.shape[0] or G.shape[0] != V.shape[1]:
        raise ShapeError(f"incompatible shapes G {G.shape}, V {V.shape}")
    if tx_power_w < 0 or noise_w <= 0:
        raise ConfigError("tx power must be >= 0 and noise power > 0")
    coupling = np.abs(G @ V) ** 2
    signal = tx_power_w * np.diag(coupling)
    interference = tx_power_w * (coupling.sum(axis=1) - np.diag(coupling))
    return signal / (interference + noise_w)


def rates(sinr_values, bandwidth_hz: float) -> np.ndarray:
    """Shannon rates B log2(1 + SINR) in bit/s."""
    s = np.asarray(sinr_values, dtype=float)
    if np.any(s < 0):
        raise ConfigError("SINR values must be >= 0")
    if bandwidth_hz <= 0:
        raise ConfigError("bandwidth must be > 0")
    return bandwidth_hz * np.log2(1.0 + s)


def baseline_uav_only(gains, tx_power_w: float, noise_w: float,
                      bandwidth_hz: float) -> np.ndarray:
    """Per-user rates of the single-antenna platform without the surface.

    Users are served in equal time shares, so each gets 1/K of the band-time
    at its own full-power SNR.
    """
    g = np.asarray(gains, dtype=complex).ravel()
    if g.size < 1:
        raise ConfigError("at least one user is required")
    snr = tx_power_w * np.abs(g) ** 2 / noise_w
    return rates(snr, bandwidth_hz) / g.size


@dataclass(frozen=True, eq=False)
class LinkState:
    """Solved multi-user link for one scenario configuration."""

    effective_channel: np.ndarray  # (users, feeds)
    precoder: np.ndarray           # (feeds, users)
    per_user_sinr: np.ndarray
    per_user_rate: np.ndarray      # bit/s

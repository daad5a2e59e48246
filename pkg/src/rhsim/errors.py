"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (bad value, unknown key, parse failure)."""


class ShapeError(ValueError):
    """Array arguments with incompatible shapes or lengths."""


class SingularGeometryError(ValueError):
    """A field point coincides with a radiating element."""


class RankDeficiencyError(ValueError):
    """Effective channel too ill-conditioned for the requested precoder."""


class InfeasibleTaskError(RuntimeError):
    """A user with pending data has zero rate; its transfer can never finish."""


class InfeasibleAllocationError(RuntimeError):
    """No power allocation satisfies the configured per-user rate floors."""

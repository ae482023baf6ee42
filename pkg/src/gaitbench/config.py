"""Engine and service configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

# Standard gravity, m/s^2. Fixed, not configurable.
G0 = 9.80665

DEFAULT_EPSILON = 1e-6
DEFAULT_CONTACT_THRESHOLD_FRACTION = 0.05
DEFAULT_MIN_STANCE_DURATION_S = 0.1


@dataclass(frozen=True)
class EngineConfig:
    """Tunables of the signal pipeline and the matching score."""

    # Guard against division by zero in the match score.
    epsilon: float = DEFAULT_EPSILON
    # Foot contact is detected where force exceeds this fraction of body weight.
    contact_threshold_fraction: float = DEFAULT_CONTACT_THRESHOLD_FRACTION
    # Contiguous contact runs shorter than this are discarded as noise.
    min_stance_duration_s: float = DEFAULT_MIN_STANCE_DURATION_S


@dataclass(frozen=True)
class ServiceConfig:
    """Runtime settings of the HTTP service; see README for the env variables."""

    store_path: str = "eks_store.json"
    host: str = "127.0.0.1"
    port: int = 8430
    engine: EngineConfig = field(default_factory=EngineConfig)

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "ServiceConfig":
        env = dict(os.environ if env is None else env)
        engine = EngineConfig(
            epsilon=float(env.get("GAITBENCH_EPSILON", DEFAULT_EPSILON)),
            contact_threshold_fraction=float(
                env.get("GAITBENCH_CONTACT_THRESHOLD", DEFAULT_CONTACT_THRESHOLD_FRACTION)
            ),
            min_stance_duration_s=float(
                env.get("GAITBENCH_MIN_STANCE_S", DEFAULT_MIN_STANCE_DURATION_S)
            ),
        )
        return cls(
            store_path=env.get("GAITBENCH_STORE", "eks_store.json"),
            host=env.get("GAITBENCH_HOST", "127.0.0.1"),
            port=int(env.get("GAITBENCH_PORT", "8430")),
            engine=engine,
        )

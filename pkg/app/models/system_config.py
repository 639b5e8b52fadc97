import dataclasses
import math
from dataclasses import dataclass
from typing import Tuple

from app.models.base import BaseModel
from app.services.custom_errors import ValidationError
from constants import CHANNELS, MAX_TRANSMITTERS, PROFILE_BETA, PROFILE_MEAN_POWER_DB, PROFILE_R_TH


@dataclass(frozen=True)
class SystemConfig(BaseModel):
    """
    User-facing system parameters in the dB domain.

    mean_power_db holds the mean channel power gains 1/lambda in dB, ordered
    as CHANNELS: (tr, td, sd, sr, te, se).
    """
    n_transmitters: int
    backhaul_prob: float
    primary_outage_threshold: float
    primary_rate_threshold: float
    secrecy_rate_threshold: float
    gamma_t_db: float
    mean_power_db: Tuple[float, float, float, float, float, float]

    def __post_init__(self):
        object.__setattr__(self, 'mean_power_db', tuple(float(v) for v in self.mean_power_db))
        self.validate()

    def validate(self):
        n = self.n_transmitters
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValidationError(f"n_transmitters must be a positive integer, got {n!r}")
        if n > MAX_TRANSMITTERS:
            raise ValidationError(f"n_transmitters above {MAX_TRANSMITTERS} is not supported, got {n}")
        if not 0.0 <= self.backhaul_prob <= 1.0:
            raise ValidationError(f"backhaul_prob must lie in [0, 1], got {self.backhaul_prob}")
        if not 0.0 < self.primary_outage_threshold < 1.0:
            raise ValidationError(
                f"primary_outage_threshold must lie in (0, 1), got {self.primary_outage_threshold}")
        # gamma_0 = 2^beta - 1 must be positive for the power constraint to exist
        if not self.primary_rate_threshold > 0.0:
            raise ValidationError(f"primary_rate_threshold must be > 0, got {self.primary_rate_threshold}")
        if not self.secrecy_rate_threshold > 0.0:
            raise ValidationError(f"secrecy_rate_threshold must be > 0, got {self.secrecy_rate_threshold}")
        if not math.isfinite(self.gamma_t_db):
            raise ValidationError(f"gamma_t_db must be finite, got {self.gamma_t_db}")
        if len(self.mean_power_db) != len(CHANNELS):
            raise ValidationError(f"mean_power_db needs {len(CHANNELS)} values, got {len(self.mean_power_db)}")
        if not all(math.isfinite(v) for v in self.mean_power_db):
            raise ValidationError("mean_power_db values must be finite")
        return True

    def mean_power(self, channel):
        return self.mean_power_db[CHANNELS.index(channel)]

    def with_overrides(self, **fields):
        if 'mean_power' in fields:
            fields['mean_power_db'] = tuple(fields.pop('mean_power'))
        return dataclasses.replace(self, **fields)

    @classmethod
    def evaluation_profile(cls, **overrides):
        base = cls(
            n_transmitters=6,
            backhaul_prob=0.99,
            primary_outage_threshold=0.1,
            primary_rate_threshold=PROFILE_BETA,
            secrecy_rate_threshold=PROFILE_R_TH,
            gamma_t_db=30.0,
            mean_power_db=tuple(PROFILE_MEAN_POWER_DB[c] for c in CHANNELS),
        )
        return base.with_overrides(**overrides) if overrides else base


@dataclass(frozen=True)
class DerivedParams(BaseModel):
    """Linear-scale parameters consumed by the analytic and simulation services."""
    lambda_tr: float
    lambda_td: float
    lambda_sd: float
    lambda_sr: float
    lambda_te: float
    lambda_se: float
    gamma_t: float
    gamma_0: float
    rho: float
    xi: float
    gamma_s: float

    @property
    def silenced(self):
        return self.gamma_s <= 0.0


@dataclass(frozen=True)
class AsymptoticParams(BaseModel):
    """
    Parameters of the Gamma_T -> infinity limit. There is no gamma_t field;
    the asymptotic SOP does not depend on it.
    """
    lambda_tr: float
    lambda_td: float
    lambda_sd: float
    lambda_sr: float
    lambda_te: float
    lambda_se: float
    gamma_0: float
    rho: float
    xi: float

import enum
import math
from dataclasses import dataclass

import numpy as np

from app.models.base import BaseModel
from app.services.custom_errors import ValidationError

RNG_CONTRACT_VERSION = 1


class SchemeKind(enum.Enum):
    STS_KNOWN = 'sts_known'
    OTS_KNOWN = 'ots_known'
    STS_BLIND = 'sts_blind'
    OTS_BLIND = 'ots_blind'

    @property
    def is_blind(self):
        return self in (SchemeKind.STS_BLIND, SchemeKind.OTS_BLIND)

    @property
    def base(self):
        """'sts' or 'ots'"""
        return self.value.split('_')[0]

    @property
    def known_counterpart(self):
        return SchemeKind(f"{self.base}_known")

    @classmethod
    def parse(cls, name):
        try:
            return name if isinstance(name, cls) else cls(str(name).strip().lower())
        except ValueError:
            choices = ', '.join(s.value for s in cls)
            raise ValidationError(f"unknown scheme {name!r}, expected one of {choices}")


class SopMethod(enum.Enum):
    EXACT_CLOSED_FORM = 'exact_closed_form'
    EXACT_QUADRATURE = 'exact_quadrature'
    ASYMPTOTIC = 'asymptotic'


@dataclass(frozen=True)
class SopValue(BaseModel):
    value: float
    method: SopMethod

    def __post_init__(self):
        # Round-off in the alternating sums may step a hair outside [0, 1].
        object.__setattr__(self, 'value', min(1.0, max(0.0, float(self.value))))


@dataclass(frozen=True)
class SopEstimate(BaseModel):
    estimate: float
    std_error: float
    trials: int
    outages: int

    @classmethod
    def from_counts(cls, outages, trials):
        if trials < 1:
            raise ValidationError(f"trials must be >= 1, got {trials}")
        estimate = outages / trials
        return cls(estimate=estimate,
                   std_error=math.sqrt(estimate * (1.0 - estimate) / trials),
                   trials=int(trials),
                   outages=int(outages))


@dataclass(frozen=True)
class QuadResult(BaseModel):
    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class RngSpec(BaseModel):
    """
    Names one independent substream: numpy Philox keyed through
    SeedSequence(seed, spawn_key=(stream_id,)).
    """
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream_id < 0:
            raise ValidationError(f"stream_id must be >= 0, got {self.stream_id}")

    def generator(self):
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(sequence))

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from app.models.base import BaseModel
from app.models.sop import SchemeKind
from app.models.system_config import SystemConfig
from app.services.custom_errors import ValidationError


class Axis(enum.Enum):
    GAMMA_T_DB = 'gamma_t_db'
    S = 's'
    PHI = 'phi'
    N_TRANSMITTERS = 'n_transmitters'

    @property
    def config_field(self):
        return {
            Axis.GAMMA_T_DB: 'gamma_t_db',
            Axis.S: 'backhaul_prob',
            Axis.PHI: 'primary_outage_threshold',
            Axis.N_TRANSMITTERS: 'n_transmitters',
        }[self]

    def coerce(self, value):
        if self is Axis.N_TRANSMITTERS:
            if float(value) != int(float(value)):
                raise ValidationError(f"n_transmitters axis needs integers, got {value!r}")
            return int(float(value))
        return float(value)

    @classmethod
    def parse(cls, name):
        try:
            return name if isinstance(name, cls) else cls(str(name).strip().lower())
        except ValueError:
            choices = ', '.join(a.value for a in cls)
            raise ValidationError(f"unknown axis {name!r}, expected one of {choices}")


class Method(enum.Enum):
    ANALYTIC = 'analytic'
    ASYMPTOTIC = 'asymptotic'
    MC = 'mc'

    @classmethod
    def parse(cls, name):
        try:
            return name if isinstance(name, cls) else cls(str(name).strip().lower())
        except ValueError:
            choices = ', '.join(m.value for m in cls)
            raise ValidationError(f"unknown method {name!r}, expected one of {choices}")


@dataclass(frozen=True)
class SweepSpec(BaseModel):
    """
    One swept axis over a fixed configuration. The swept field of `fixed` is
    ignored; each point substitutes its own value.
    """
    axis: Axis
    axis_values: Tuple
    fixed: SystemConfig
    schemes: Tuple[SchemeKind, ...]
    methods: Tuple[Method, ...]
    trials: int = 1000000
    seed: int = 0
    rel_tol: float = 1e-8
    workers: int = 1
    quad_budget: int = 2000000

    def __post_init__(self):
        object.__setattr__(self, 'axis', Axis.parse(self.axis))
        object.__setattr__(self, 'axis_values', tuple(self.axis.coerce(v) for v in self.axis_values))
        object.__setattr__(self, 'schemes', tuple(dict.fromkeys(SchemeKind.parse(s) for s in self.schemes)))
        object.__setattr__(self, 'methods', tuple(dict.fromkeys(Method.parse(m) for m in self.methods)))
        self.validate()

    def validate(self):
        if not self.axis_values:
            raise ValidationError("axis_values must not be empty")
        if any(b <= a for a, b in zip(self.axis_values, self.axis_values[1:])):
            raise ValidationError("axis_values must be strictly increasing")
        if not self.schemes:
            raise ValidationError("at least one scheme is required")
        if not self.methods:
            raise ValidationError("at least one method is required")
        for scheme in self.schemes:
            if scheme.is_blind and Method.ANALYTIC in self.methods:
                raise ValidationError(f"no analytic SOP exists for the blind scheme {scheme.value}")
            if scheme.is_blind and Method.ASYMPTOTIC in self.methods:
                raise ValidationError(f"no asymptotic SOP exists for the blind scheme {scheme.value}")
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.rel_tol > 0:
            raise ValidationError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        if isinstance(self.quad_budget, bool) or int(self.quad_budget) != self.quad_budget or self.quad_budget < 1:
            raise ValidationError(f"quad_budget must be a positive integer, got {self.quad_budget}")
        for value in self.axis_values:
            self.config_at(value)
        return True

    def config_at(self, value):
        return self.fixed.with_overrides(**{self.axis.config_field: value})


@dataclass(frozen=True)
class SweepRow(BaseModel):
    axis: str
    axis_value: float
    scheme: str
    method: str
    sop: float
    std_error: Optional[float] = None
    trials: Optional[int] = None


@dataclass(frozen=True)
class CompareRow(BaseModel):
    scheme: str
    method: str
    analytic: float
    mc: float
    std_error: float
    z: float
    passed: bool = field(default=False)


@dataclass(frozen=True)
class GainRow(BaseModel):
    axis: str
    axis_value: float
    scheme: str
    known_sop: float
    blind_sop: float
    gain: float
    std_error: float

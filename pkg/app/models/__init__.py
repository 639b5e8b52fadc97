from app.models.base import BaseModel
from app.models.system_config import SystemConfig, DerivedParams, AsymptoticParams
from app.models.sop import RNG_CONTRACT_VERSION, SchemeKind, SopMethod, SopValue, SopEstimate, QuadResult, RngSpec
from app.models.sweep import Axis, Method, SweepSpec, SweepRow, CompareRow, GainRow

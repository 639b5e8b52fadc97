import logging
import math

from app.models.system_config import AsymptoticParams, DerivedParams, SystemConfig
from app.services.custom_errors import ValidationError
from constants import CHANNELS

logger = logging.getLogger(__name__)


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


class ParamsService:
    @staticmethod
    def rates(config: SystemConfig) -> dict:
        """Exponential rate parameters lambda_xy = 10^(-dB/10) keyed by channel"""
        return {f"lambda_{c}": db_to_linear(-config.mean_power(c)) for c in CHANNELS}

    @staticmethod
    def derive(config: SystemConfig) -> DerivedParams:
        """
        Convert a dB-domain configuration into linear-scale parameters,
        including the secondary power constraint.
        """
        if not isinstance(config, SystemConfig):
            raise ValidationError(f"expected a SystemConfig, got {type(config).__name__}")
        config.validate()
        rates = ParamsService.rates(config)
        gamma_t = db_to_linear(config.gamma_t_db)
        gamma_0 = 2.0 ** config.primary_rate_threshold - 1.0
        rho = 2.0 ** config.secrecy_rate_threshold
        lambda_tr = rates['lambda_tr']
        phi = config.primary_outage_threshold

        xi = (math.exp(-lambda_tr * gamma_0 / gamma_t) / (1.0 - phi) - 1.0) / (lambda_tr * gamma_0)
        gamma_s = gamma_t * rates['lambda_sr'] * xi if xi > 0 else 0.0
        if gamma_s == 0.0:
            logger.warning(f"Power constraint silences the secondary network (xi={xi:.6g}, "
                           f"Gamma_T={config.gamma_t_db} dB, Phi={phi})")
        params = DerivedParams(gamma_t=gamma_t, gamma_0=gamma_0, rho=rho, xi=xi, gamma_s=gamma_s, **rates)
        logger.debug(f"Derived parameters: {params.to_dict()}")
        return params

    @staticmethod
    def xi_asymptotic(config: SystemConfig) -> float:
        """Power-constraint coefficient in the Gamma_T -> infinity limit"""
        config.validate()
        lambda_tr = db_to_linear(-config.mean_power('tr'))
        gamma_0 = 2.0 ** config.primary_rate_threshold - 1.0
        phi = config.primary_outage_threshold
        return (phi / (1.0 - phi)) / (lambda_tr * gamma_0)

    @staticmethod
    def asymptotic_params(config: SystemConfig) -> AsymptoticParams:
        return AsymptoticParams(
            gamma_0=2.0 ** config.primary_rate_threshold - 1.0,
            rho=2.0 ** config.secrecy_rate_threshold,
            xi=ParamsService.xi_asymptotic(config),
            **ParamsService.rates(config),
        )

    @staticmethod
    def primary_outage(config: SystemConfig) -> float:
        """Achieved primary outage P[Gamma_TR < Gamma_0] under the derived secondary power"""
        from app.services.analytic_service import AnalyticService

        params = ParamsService.derive(config)
        return AnalyticService.cdf_gamma_tr(params.gamma_0, params)

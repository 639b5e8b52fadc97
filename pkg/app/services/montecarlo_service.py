"""
Event-level simulator of the cognitive small-cell network.

Every trial draws its channels from one row of a uniform matrix with column
layout [h_TD, h_TE, backhaul_1..N, h_SD_1..N, h_SE_1..N]. Trials are grouped
into fixed blocks of `block_size`; block j draws its matrix from substream j
(numpy Philox keyed by SeedSequence(seed, spawn_key=(j,))). Because the block
boundaries do not depend on the worker count, the outage count for a given
(seed, trials, block_size) is the same however the blocks are distributed.
Exponential gains are drawn by inversion, -log1p(-U) / lambda.
"""
import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from app.models.sop import RNG_CONTRACT_VERSION, RngSpec, SchemeKind, SopEstimate
from app.models.system_config import DerivedParams, SystemConfig
from app.services.custom_errors import ValidationError
from app.services.params_service import ParamsService

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 65536


def _columns(n_tx):
    return 2 + 3 * n_tx


def exponential_gain(uniform, rate):
    """Exponential channel power gain with mean 1/rate by inversion of U(0, 1)"""
    return -np.log1p(-uniform) / rate


def outage_from_uniforms(p: DerivedParams, config: SystemConfig, scheme: SchemeKind, u: np.ndarray) -> np.ndarray:
    """Secrecy outage indicator per row of a (trials, 2 + 3N) uniform matrix"""
    n_tx = config.n_transmitters
    trials = u.shape[0]
    if p.gamma_s <= 0.0:
        return np.ones(trials, dtype=bool)

    h_td = exponential_gain(u[:, 0], p.lambda_td)
    h_te = exponential_gain(u[:, 1], p.lambda_te)
    active = u[:, 2:2 + n_tx] < config.backhaul_prob
    h_sd = exponential_gain(u[:, 2 + n_tx:2 + 2 * n_tx], p.lambda_sd)
    h_se = exponential_gain(u[:, 2 + 2 * n_tx:2 + 3 * n_tx], p.lambda_se)

    # common interferer draws are shared by all branches of a trial
    snr_sd = p.gamma_s * h_sd / (p.gamma_t * h_td + 1.0)[:, None]
    snr_se = p.gamma_s * h_se / (p.gamma_t * h_te + 1.0)[:, None]
    secrecy_ratio = (1.0 + snr_sd) / (1.0 + snr_se)

    score = h_sd if scheme.base == 'sts' else secrecy_ratio
    if not scheme.is_blind:
        score = np.where(active, score, -np.inf)
    # argmax returns the lowest index on ties
    chosen = np.argmax(score, axis=1)
    rows = np.arange(trials)
    selected_active = active[rows, chosen]
    return ~selected_active | (secrecy_ratio[rows, chosen] < p.rho)


class MonteCarloService:
    @staticmethod
    def sample_trial(p: DerivedParams, config: SystemConfig, scheme, rng: np.random.Generator) -> bool:
        """One trial; True means a secrecy outage"""
        scheme = SchemeKind.parse(scheme)
        if p.gamma_s <= 0.0:
            return True
        u = rng.random((1, _columns(config.n_transmitters)))
        return bool(outage_from_uniforms(p, config, scheme, u)[0])

    @staticmethod
    def count_block(config: SystemConfig, scheme, seed: int, block: int, size: int) -> int:
        """Outages among `size` trials of block `block`"""
        scheme = SchemeKind.parse(scheme)
        p = ParamsService.derive(config)
        rng = RngSpec(seed, block).generator()
        u = rng.random((size, _columns(config.n_transmitters)))
        return int(np.count_nonzero(outage_from_uniforms(p, config, scheme, u)))

    @staticmethod
    def simulate_sop(config: SystemConfig, scheme, trials: int, seed: int, workers: int = 1,
                     block_size: int = DEFAULT_BLOCK_SIZE) -> SopEstimate:
        """Monte Carlo estimate of the SOP of `scheme`"""
        scheme = SchemeKind.parse(scheme)
        if int(trials) != trials or trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {trials}")
        if workers < 1:
            raise ValidationError(f"workers must be >= 1, got {workers}")
        if block_size < 1:
            raise ValidationError(f"block_size must be >= 1, got {block_size}")
        RngSpec(seed)
        p = ParamsService.derive(config)
        if p.gamma_s <= 0.0:
            logger.info(f"Secondary silenced; {scheme.value} SOP is 1 without sampling")
            return SopEstimate.from_counts(trials, trials)

        sizes = [min(block_size, trials - start) for start in range(0, trials, block_size)]
        jobs = [(config, scheme, seed, block, size) for block, size in enumerate(sizes)]
        if workers == 1 or len(jobs) == 1:
            outages = sum(MonteCarloService.count_block(*job) for job in jobs)
        else:
            with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
                outages = sum(pool.map(MonteCarloService.count_block, *zip(*jobs)))
        estimate = SopEstimate.from_counts(outages, trials)
        logger.info(f"Simulated {scheme.value}: {outages}/{trials} outages "
                    f"(estimate={estimate.estimate:.6g}, workers={workers}, rng contract v{RNG_CONTRACT_VERSION})")
        return estimate

    @staticmethod
    def simulate_primary_outage(config: SystemConfig, trials: int, seed: int) -> SopEstimate:
        """Monte Carlo of P[Gamma_TR < Gamma_0] under the derived secondary power"""
        if int(trials) != trials or trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {trials}")
        p = ParamsService.derive(config)
        u = RngSpec(seed).generator().random((trials, 2))
        h_tr = exponential_gain(u[:, 0], p.lambda_tr)
        h_sr = exponential_gain(u[:, 1], p.lambda_sr)
        snr_tr = p.gamma_t * h_tr / (p.gamma_s * h_sr + 1.0)
        return SopEstimate.from_counts(int(np.count_nonzero(snr_tr < p.gamma_0)), trials)

import os
from dotenv import load_dotenv

basedir = os.path.abspath(os.path.dirname(__file__))
load_dotenv(os.path.join(basedir, '.env'))


class Config(object):
    DEBUG = os.environ.get('DEBUG') or False
    PORT = os.environ.get('PORT')
    LOG_FILE = os.environ.get('LOG_FILE', 'log_data.log')
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')

    # Monte Carlo settings
    SOP_TRIALS = int(os.environ.get('SOP_TRIALS', 1000000))
    SOP_SEED = int(os.environ.get('SOP_SEED', 20210601))
    SOP_WORKERS = int(os.environ.get('SOP_WORKERS', os.cpu_count() or 1))
    # Changing the block size changes which substream a trial draws from.
    SOP_BLOCK_SIZE = int(os.environ.get('SOP_BLOCK_SIZE', 65536))

    # Quadrature settings
    SOP_REL_TOL = float(os.environ.get('SOP_REL_TOL', 1e-8))
    SOP_QUAD_BUDGET = int(os.environ.get('SOP_QUAD_BUDGET', 2000000))


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'DEBUG')


class TestConfig(Config):
    DEBUG = True
    LOG_FILE = os.path.join(basedir, 'test_log.log')
    SOP_TRIALS = 100000
    SOP_WORKERS = 1


configs = dict(
    dev=DevelopmentConfig,
    prod=Config,
    test=TestConfig
)

Config_is = configs[os.environ.get('CONFIG', 'dev')]

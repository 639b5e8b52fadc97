import os

os.environ.setdefault('CONFIG', 'test')

import pytest
from click.testing import CliRunner

from app import create_app
from app.models import SystemConfig
from app.services.params_service import ParamsService

"""
fixtures can be run with different scopes:

function - run once per test function (default scope)
class - run once per test class
module - run once per module (e.g., a test file)
session - run once per session
"""


@pytest.fixture(scope='session')
def profile_config():
    """Evaluation profile: N = 6, s = 0.99, Phi = 0.1, Gamma_T = 30 dB"""
    return SystemConfig.evaluation_profile()


@pytest.fixture(scope='session')
def profile_params(profile_config):
    return ParamsService.derive(profile_config)


@pytest.fixture(scope='session')
def profile_asymptotic(profile_config):
    return ParamsService.asymptotic_params(profile_config)


@pytest.fixture(scope='session')
def silenced_config():
    # 1 - exp(-lambda_tr gamma_0 / Gamma_T) is about 0.0205 at 10 dB, above Phi
    return SystemConfig.evaluation_profile(gamma_t_db=10.0, primary_outage_threshold=0.01)


@pytest.fixture
def cli_runner():
    return CliRunner()


@pytest.fixture(scope='module')
def test_client():
    flask_app = create_app()

    # Create a test client using the Flask application configured for testing
    with flask_app.test_client() as testing_client:
        # Establish an application context
        with flask_app.app_context():
            yield testing_client  # this is where the testing happens!

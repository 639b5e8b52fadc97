import json

import pytest

from constants import COMPARE_HEADER, CSV_HEADER


def test_derive_holds_primary_outage(test_client):
    """
    GIVEN system fields posted as JSON
    WHEN /v1/sop/derive is requested (POST)
    THEN the derived parameters keep the primary outage at Phi
    """
    response = test_client.post('/v1/sop/derive', json={'N': 3, 'phi': 0.1, 'gamma_t_db': 20})
    assert response.status_code == 200
    data = json.loads(response.data)['data']
    assert data['primary_outage'] == pytest.approx(0.1, rel=1e-12)
    assert data['gamma_t'] == pytest.approx(100.0)
    assert data['xi_asymptotic'] > 0.0


def test_sweep_returns_csv(test_client):
    """
    GIVEN an analytic sweep over two Gamma_T values
    WHEN /v1/sop/sweep is requested (POST)
    THEN the body is a CSV table with the header and one row per point
    """
    response = test_client.post('/v1/sop/sweep', json={'values': [10, 20], 'schemes': ['sts_known'],
                                                       'methods': ['analytic']})
    assert response.status_code == 200
    assert response.mimetype == 'text/csv'
    lines = response.get_data(as_text=True).splitlines()
    assert lines[0] == ','.join(CSV_HEADER)
    assert len(lines) == 3
    assert lines[1].startswith('gamma_t_db,10,sts_known,analytic,')


def test_blind_analytic_is_rejected(test_client):
    response = test_client.post('/v1/sop/sweep', json={'schemes': ['sts_blind'], 'methods': ['analytic']})
    assert response.status_code == 400
    assert 'blind' in json.loads(response.data)['message']


@pytest.mark.parametrize('body', [{'colour': 'blue'}, {'N': 'many'}, [1, 2]])
def test_bad_body_is_rejected(test_client, body):
    response = test_client.post('/v1/sop/sweep', json=body)
    assert response.status_code == 400


def test_derive_takes_system_fields_only(test_client):
    response = test_client.post('/v1/sop/derive', json={'trials': 10})
    assert response.status_code == 400


def test_compare_report(test_client):
    """
    GIVEN the evaluation profile and 200 000 trials
    WHEN /v1/sop/compare is requested for the STS scheme
    THEN the analytic row passes and the columns follow the report header
    """
    response = test_client.post('/v1/sop/compare', json={'schemes': ['sts_known'], 'trials': 200000})
    assert response.status_code == 200
    body = json.loads(response.data)
    assert body['columns'] == list(COMPARE_HEADER)
    assert len(body['data']) == 1
    assert body['data'][0]['passed'] is True
    assert body['data'][0]['method'] == 'analytic'

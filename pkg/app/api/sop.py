"""API endpoints for sweeps, comparison reports and derived parameters."""

from flask import Blueprint, Response, current_app, jsonify, request

from app.models import SystemConfig
from app.services.config_file import apply_system_fields, parse_mapping
from app.services.custom_errors import ValidationError
from app.services.params_service import ParamsService
from app.services.sweep_service import SweepService
from constants import COMPARE_HEADER

sop_bp = Blueprint('sop', __name__)


def _read_body():
    data = request.get_json(silent=True)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValidationError("request body must be a JSON object")
    system, sweep = parse_mapping(data)
    config = apply_system_fields(SystemConfig.evaluation_profile(), system)
    return config, sweep


@sop_bp.route('/sweep', methods=['POST'])
def sweep():
    """Run a sweep and return the CSV table"""
    config, fields = _read_body()
    spec = SweepService.build_spec(config, fields, current_app.config)
    current_app.logger.info(f"HTTP sweep over {spec.axis.value} with {len(spec.axis_values)} points")
    rows = SweepService.run_sweep(spec, block_size=current_app.config['SOP_BLOCK_SIZE'])
    return Response(SweepService.to_csv(rows), mimetype='text/csv')


@sop_bp.route('/compare', methods=['POST'])
def compare():
    """
    Compare analytic values with Monte Carlo at one configuration. Every row
    is returned; a failing report answers 409 with the failed rows.
    """
    config, fields = _read_body()
    fields.setdefault('methods', ['analytic', 'mc'])
    spec = SweepService.build_spec(config, fields, current_app.config)
    report = SweepService.compare_report(spec, block_size=current_app.config['SOP_BLOCK_SIZE'])
    SweepService.ensure_passed(report)
    return jsonify({
        'message': 'Success',
        'status': 200,
        'columns': list(COMPARE_HEADER),
        'data': [row.to_dict() for row in report],
    }), 200


@sop_bp.route('/derive', methods=['POST'])
def derive():
    config, fields = _read_body()
    if fields:
        raise ValidationError(f"derive takes system fields only, got {', '.join(sorted(fields))}")
    derived = ParamsService.derive(config)
    return jsonify({
        'message': 'Success',
        'status': 200,
        'data': {
            **derived.to_dict(),
            'xi_asymptotic': ParamsService.xi_asymptotic(config),
            'primary_outage': ParamsService.primary_outage(config),
        },
    }), 200

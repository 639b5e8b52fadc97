from flask import Blueprint, jsonify

from app.services.custom_errors import CustomError

bp = Blueprint('api', __name__)


@bp.app_errorhandler(CustomError)
def handle_invalid_usage(error):
    response = jsonify(error.to_dict())
    response.status_code = error.status or 500
    return response


from app.api import status

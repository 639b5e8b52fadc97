from flask import jsonify

from app.api import bp
from app.models import RNG_CONTRACT_VERSION


@bp.route('/', methods=["GET"])
def index():
    return jsonify({"message": "Success", "status": 200, "rng_contract": RNG_CONTRACT_VERSION})

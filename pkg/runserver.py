from app import create_app
from app.services.params_service import ParamsService
from app.services.sweep_service import SweepService
from app.models import SystemConfig

app = create_app()


@app.shell_context_processor
def make_shell_context():
    return {'SystemConfig': SystemConfig, 'ParamsService': ParamsService, 'SweepService': SweepService}


if __name__ == "__main__":
    app.run(host='0.0.0.0', debug=app.config["DEBUG"], use_reloader=True, threaded=True, port=app.config["PORT"])

import logging
import sys
from logging.handlers import RotatingFileHandler

from flask import Flask
from flask_compress import Compress

from config import Config_is

compress = Compress()

app = None

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(log_file=None, level=None, stream=True):
    """Rotating log file plus an optional stderr handler on the root logger"""
    log_file = log_file or Config_is.LOG_FILE
    level = getattr(logging, str(level or Config_is.LOG_LEVEL).upper(), logging.INFO)
    formatter = logging.Formatter(_FORMAT)
    file_handler = RotatingFileHandler(log_file, maxBytes=10000, backupCount=2)
    file_handler.setFormatter(formatter)
    handlers = [file_handler]
    if stream:
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(formatter)
        stream_handler.setLevel(max(level, logging.INFO))
        handlers.append(stream_handler)
    logging.basicConfig(handlers=handlers, level=level, force=True)
    return file_handler


def create_app(config_object=None):
    """Create Flask application."""
    global app
    if app and config_object is None:
        return app
    app = Flask(__name__)
    app.config.from_object(config_object or Config_is)
    compress.init_app(app)

    # app.logger propagates to the root handlers
    configure_logging(app.config['LOG_FILE'], app.config['LOG_LEVEL'], stream=False)

    from app.api import bp as api_bp
    from app.api.sop import sop_bp

    app.register_blueprint(api_bp, url_prefix='/v1')
    app.register_blueprint(sop_bp, url_prefix='/v1/sop')

    return app

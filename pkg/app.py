"""Flask app factory and command-line entry point.

There is no web surface: the app carries configuration and the click
command groups registered by the blueprints. Run it as

    flask --app app gram data/icosahedron.json
    flask --app app fock ccr --dim 2 --cutoff 12
    flask --app app suite regression --seed 3
"""

import os

from flask import Flask
from flask.cli import FlaskGroup

from suite_engine import __version__

DEFAULTS = {
    'SEED': 0,
    'EPS_RANK': 1e-10,
    'PSD_EPS': 1e-10,
    'SHADOW_TOL': 1e-8,
    'PARALLEL_EPS': 1e-10,
    'FOCK_CUTOFF_D1': 30,
    'FOCK_CUTOFF_D2': 12,
    'SUITE_WORKERS': 1,
    'REPORT_INDENT': 2,
}


def create_app(test_config=None):
    app = Flask(__name__)
    app.config.from_mapping(DEFAULTS)
    # COHERENT_SEED=7 sets SEED; values are parsed as JSON
    app.config.from_prefixed_env('COHERENT')
    # an environment seed outranks the seed written in a suite file
    app.config['SEED_FROM_ENV'] = 'COHERENT_SEED' in os.environ
    if test_config is not None:
        app.config.from_mapping(test_config)

    from blueprints.spaces import spaces_bp
    from blueprints.maps import maps_bp
    from blueprints.fock import fock_bp
    from blueprints.suites import suites_bp
    app.register_blueprint(spaces_bp)
    app.register_blueprint(maps_bp)
    app.register_blueprint(fock_bp)
    app.register_blueprint(suites_bp)

    app.logger.debug("coherent workbench %s configured", __version__)
    return app


def main():
    FlaskGroup(create_app=create_app, add_version_option=False)()


if __name__ == '__main__':
    main()

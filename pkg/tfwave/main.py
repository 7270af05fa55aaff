"""Main application module: harness factory and command line"""
import json
import logging
import os
import sys
from logging.handlers import RotatingFileHandler

import click

from .config import config, env_overrides
from .utils.errors import ConfigError
from .utils.harness import EXIT_CONFIG, Harness
from .utils.parse_utils import parse_extra_args

logger = logging.getLogger('tfwave')


def create_app(config_name='default', **overrides):
    """Create a Harness for the named configuration; keyword overrides replace settings"""
    settings = config[config_name]
    overrides = dict(env_overrides(), **overrides)
    if overrides:
        settings = type(settings.__name__, (settings,), overrides)
    harness = Harness(settings)
    settings.init_app(harness)

    # Configure logging
    logger.setLevel(getattr(logging, str(settings.LOG_LEVEL).upper(), logging.INFO))
    if not settings.DEBUG and not any(isinstance(h, RotatingFileHandler) for h in logger.handlers):
        file_handler = RotatingFileHandler(settings.LOG_FILE, maxBytes=settings.LOG_MAX_BYTES,
                                           backupCount=settings.LOG_BACKUP_COUNT)
        file_handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
        file_handler.setLevel(logging.INFO)
        logger.addHandler(file_handler)
        logger.info('tfwave startup')

    return harness


def _load_options(config_file, extra_args):
    """JSON config file first, then command-line flags on top"""
    options = {}
    if config_file:
        try:
            with open(config_file, encoding='utf-8') as handle:
                options = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read config file {config_file}: {str(e)}")
        if not isinstance(options, dict):
            raise ConfigError(f"Config file {config_file} must hold a JSON object")
    options.update(parse_extra_args(extra_args))
    return options


def _finish(result):
    if result.message:
        click.echo(f"{result.kind}: {result.message}", err=True)
    for name, path in result.paths.items():
        click.echo(f"{name}: {path}")
    if 'pass' in result.summary:
        click.echo(f"{result.kind}: {'pass' if result.summary['pass'] else 'FAIL'}")
    sys.exit(result.exit_code)


@click.group()
@click.option('--env', 'config_name', default=lambda: os.environ.get('TFWAVE_CONFIG', 'default'),
              type=click.Choice(sorted(config)), help='Configuration profile')
@click.pass_context
def cli(ctx, config_name):
    """Time-frequency norms, Fourier multipliers and nonlinear wave experiments"""
    ctx.obj = create_app(config_name)


@cli.command(context_settings={'ignore_unknown_options': True, 'allow_extra_args': True})
@click.argument('kind')
@click.option('--config', 'config_file', type=click.Path(), help='JSON file of experiment options')
@click.pass_context
def run(ctx, kind, config_file):
    """Run one experiment; options are given as --key value flags"""
    try:
        options = _load_options(config_file, ctx.args)
    except ValueError as e:
        click.echo(f"{kind}: {str(e)}", err=True)
        sys.exit(EXIT_CONFIG)
    _finish(ctx.obj.run(kind, options))


@cli.command(context_settings={'ignore_unknown_options': True, 'allow_extra_args': True})
@click.argument('kind')
@click.option('--config', 'config_file', type=click.Path(), help='JSON file of experiment options')
@click.option('--force', is_flag=True, help='Append a new version over an existing calibration')
@click.pass_context
def calibrate(ctx, kind, config_file, force):
    """Calibrate the constant of a ratio experiment on the calibration seed stream"""
    try:
        options = _load_options(config_file, ctx.args)
    except ValueError as e:
        click.echo(f"{kind}: {str(e)}", err=True)
        sys.exit(EXIT_CONFIG)
    _finish(ctx.obj.calibrate(kind, options, force=force))


@cli.command('verify-all')
@click.option('--out', 'out_dir', type=click.Path(), help='Directory for the suite reports')
@click.option('--trials', type=int, help='Trial count for ratio experiments')
@click.pass_context
def verify_all(ctx, out_dir, trials):
    """Run the acceptance suite against the stored calibration constants"""
    _finish(ctx.obj.verify_all(out_dir, trials))


@cli.command('calibrate-suite')
@click.option('--out', 'out_dir', type=click.Path(), help='Directory for the calibration reports')
@click.option('--trials', type=int, help='Trial count for ratio experiments')
@click.option('--force', is_flag=True, help='Append new versions over existing calibrations')
@click.pass_context
def calibrate_suite(ctx, out_dir, trials, force):
    """Calibrate the constant of every ratio experiment in the acceptance suite"""
    _finish(ctx.obj.calibrate_suite(out_dir, trials, force))


def main():
    cli(prog_name='tfwave')


if __name__ == '__main__':
    main()

"""Configuration module for the toolkit"""
import os
import tempfile

from dotenv import load_dotenv

from .utils.constants import SAFETY_FACTOR

load_dotenv()

# The versioned calibration store kept next to the package
SHIPPED_CAL_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'calibration')

# Settings the environment overrides in every profile, read when a harness is created
ENV_SETTINGS = {
    'CAL_DIR': ('TFWAVE_CAL_DIR', str),
    'OUTPUT_DIR': ('TFWAVE_OUTPUT_DIR', str),
    'DEFAULT_TRIALS': ('TFWAVE_TRIALS', int),
    'WORKERS': ('TFWAVE_WORKERS', int),
    'LOG_LEVEL': ('LOG_LEVEL', str),
}


def env_overrides():
    """Settings taken from TFWAVE_* variables that are set and non-empty"""
    overrides = {}
    for name, (variable, cast) in ENV_SETTINGS.items():
        value = os.environ.get(variable)
        if value:
            overrides[name] = cast(value)
    return overrides


class Config:
    """Base configuration class"""
    # Application
    APP_NAME = 'tfwave'

    # Calibration store and report locations
    CAL_DIR = SHIPPED_CAL_DIR
    OUTPUT_DIR = 'results'

    # Experiments
    CALIBRATION_SAFETY_FACTOR = SAFETY_FACTOR
    DEFAULT_TRIALS = 100
    WORKERS = 1
    VERIFY_ALL_TRIALS = None  # None keeps each experiment's own trial count

    # Memory management
    STFT_MEMORY_THRESHOLD_MB = 512

    # Logging configuration
    LOG_FILE = 'logs/tfwave.log'
    LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'
    LOG_LEVEL = 'INFO'
    LOG_MAX_BYTES = 10240
    LOG_BACKUP_COUNT = 10

    DEBUG = False
    TESTING = False

    @staticmethod
    def init_app(harness):
        """Create the calibration, output and log directories"""
        settings = harness.settings
        os.makedirs(settings.CAL_DIR, exist_ok=True)
        os.makedirs(settings.OUTPUT_DIR, exist_ok=True)

        log_dir = os.path.dirname(settings.LOG_FILE)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True

    @classmethod
    def init_app(cls, harness):
        Config.init_app(harness)

        import logging
        logging.basicConfig(level=logging.DEBUG)


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True

    # Use temporary directories for testing unless the environment names others
    CAL_DIR = os.path.join(tempfile.gettempdir(), 'tfwave_test', 'calibration')
    OUTPUT_DIR = os.path.join(tempfile.gettempdir(), 'tfwave_test', 'results')
    LOG_FILE = os.path.join(tempfile.gettempdir(), 'tfwave_test', 'tfwave.log')
    DEFAULT_TRIALS = 8
    VERIFY_ALL_TRIALS = 8

    @classmethod
    def init_app(cls, harness):
        Config.init_app(harness)


class ProductionConfig(Config):
    """Production configuration: full trial counts, logs to file and stderr"""
    VERIFY_ALL_TRIALS = None

    @classmethod
    def init_app(cls, harness):
        Config.init_app(harness)

        import logging
        import sys

        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(logging.Formatter(cls.LOG_FORMAT))
        stream_handler.setLevel(logging.WARNING)
        logging.getLogger('tfwave').addHandler(stream_handler)


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': ProductionConfig
}

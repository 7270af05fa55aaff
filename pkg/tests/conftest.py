import pytest
from click.testing import CliRunner

from tfwave import create_app
from tfwave.config import ENV_SETTINGS, TestingConfig
from tfwave.utils.grid import GridSpec
from tfwave.utils.samplers import gabor_superposition, trial_rng
from tfwave.utils.tfnorms import Window


@pytest.fixture
def clean_env(monkeypatch):
    """Drop TFWAVE_* overrides from the surrounding environment."""
    for variable, _ in ENV_SETTINGS.values():
        monkeypatch.delenv(variable, raising=False)
    return monkeypatch


@pytest.fixture
def app(tmp_path, clean_env):
    """Harness with calibration store and reports in a per-test directory."""
    return create_app(
        'testing',
        CAL_DIR=str(tmp_path / 'calibration'),
        OUTPUT_DIR=str(tmp_path / 'results'),
        LOG_FILE=str(tmp_path / 'tfwave.log'),
    )


@pytest.fixture
def cli_env(tmp_path, clean_env):
    """Point the testing profile used by the CLI at a per-test directory."""
    clean_env.setattr(TestingConfig, 'CAL_DIR', str(tmp_path / 'calibration'))
    clean_env.setattr(TestingConfig, 'OUTPUT_DIR', str(tmp_path / 'results'))
    clean_env.setattr(TestingConfig, 'LOG_FILE', str(tmp_path / 'tfwave.log'))
    clean_env.setenv('TFWAVE_CONFIG', 'testing')
    return tmp_path


@pytest.fixture
def runner():
    """A test runner for the click commands."""
    return CliRunner()


@pytest.fixture
def grid():
    return GridSpec(1, 256, 16.0)


@pytest.fixture
def small_grid():
    return GridSpec(1, 128, 16.0)


@pytest.fixture
def grid2d():
    return GridSpec(2, 32, 8.0)


@pytest.fixture
def unit_gaussian(grid):
    return Window.gaussian(grid, normalized=True)


@pytest.fixture
def bump(grid):
    return Window.bump(grid)


@pytest.fixture
def gabor(grid):
    """Seeded Gabor superposition on the 1-d grid."""
    return gabor_superposition(grid, trial_rng(0, 0, 0))

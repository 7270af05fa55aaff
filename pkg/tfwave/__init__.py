"""Time-frequency norms, Fourier multipliers and nonlinear wave experiments"""
from .main import cli, create_app

__all__ = ['cli', 'create_app']

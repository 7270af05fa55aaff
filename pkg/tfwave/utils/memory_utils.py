"""Memory usage monitoring utilities"""
import gc
import logging
import os

import psutil

logger = logging.getLogger(__name__)

COMPLEX_BYTES = 16


def log_memory_usage(label=''):
    """Log current resident memory and return it in MB"""
    try:
        process = psutil.Process(os.getpid())
        memory_mb = process.memory_info().rss / 1024 / 1024
        prefix = f"{label}: " if label else ''
        logger.info(f"{prefix}Current memory usage: {memory_mb:.2f} MB")
        return memory_mb
    except Exception as e:
        logger.error(f"Error getting memory usage: {str(e)}")
        return 0


def stft_footprint_mb(n, d, x_stride):
    """Size of one batch of local spectra (x-nodes times grid points) in MB"""
    x_nodes = (n // x_stride) ** d
    return x_nodes * n ** d * COMPLEX_BYTES / 1024 / 1024


def check_stft_footprint(n, d, x_stride, threshold_mb):
    """Warn when a single STFT would exceed the threshold; returns the estimate"""
    footprint = stft_footprint_mb(n, d, x_stride)
    available = psutil.virtual_memory().available / 1024 / 1024
    if footprint > threshold_mb or footprint > available / 2:
        logger.warning(f"STFT on n={n}, d={d}, x-stride {x_stride} needs about {footprint:.0f} MB "
                       f"({available:.0f} MB available)")
    return footprint


def optimize_memory():
    """Release unreachable arrays between experiments"""
    try:
        collected = gc.collect()
        logger.info(f"Memory optimization completed ({collected} objects collected)")
    except Exception as e:
        logger.error(f"Error optimizing memory: {str(e)}")

import numpy as np

from interferometer.verification import random_circuit

__all__ = ['max_error', 'random_circuit']


def max_error(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))

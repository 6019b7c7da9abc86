"""Shared weights for the test suite."""

import numpy as np

from pseudoanalytic import coords, genpair
from pseudoanalytic.numfield import real_field


def exp_y(c=1.0):
    return real_field(lambda z: np.exp(c * np.asarray(z).imag), name=f"exp({c}*y)")


def yukawa_weight(c=1.0):
    return genpair.SeparableWeight(lambda u: np.ones_like(u), lambda v: np.exp(c * v), coords.cartesian(), "e^cy")


def unit_weight():
    return genpair.SeparableWeight(np.ones_like, np.ones_like, coords.cartesian(), "1")

"""Python access to the qrq library. Every call returns plain dicts and lists."""

import json

from . import _core
from ._core import QrqError, x_min

__all__ = ["QrqError", "amplitudes", "regime", "phi_en", "x_min", "invariants", "compare", "tables"]


def amplitudes(xi1, xi2, theta1, theta2):
    return json.loads(_core.amplitudes(xi1, xi2, theta1, theta2))


def regime(xi1, xi2, theta1, theta2, tol=1e-6):
    return json.loads(_core.regime(xi1, xi2, theta1, theta2, tol))


def phi_en(x, delta, branch="mm"):
    return json.loads(_core.phi_en(x, delta, branch))


def invariants(matrix):
    rows = [[complex(v) for v in row] for row in matrix]
    return json.loads(_core.invariants(rows))


def compare(xi1, xi2, theta1, theta2, n_start=16):
    return json.loads(_core.compare(xi1, xi2, theta1, theta2, n_start))


def tables(which=0):
    return json.loads(_core.tables(which))

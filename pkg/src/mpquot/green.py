"""Green-function sums of the conformal Laplacian on sphere quotients.

The quotient Green function at the base point, pulled back to the covering
sphere, is the sum of inverse-power chordal distances over the orbit. The
unnormalized convention is used throughout: no dimensional constant in front
of the sum.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DegenerateTriple, DimensionTooSmall, OnOrbit
from .groups import Orbit
from .sphere import Chart, stereo_project_many

ORBIT_TOL = 1e-9
TRIPLE_TOL = 1e-9


class GreenEval(NamedTuple):
    """Green-function value plus the chordal distance to the nearest orbit point."""

    value: float
    nearest_chord: float


def green_values(orb: Orbit, n: int, q) -> tuple[np.ndarray, np.ndarray]:
    """Batch Green-function values over rows of q; returns (values, nearest chords).

    Does not police the orbit-distance precondition; callers inspect the
    nearest chords (verification samplers use them for rejection).
    """
    if n < 3:
        raise DimensionTooSmall("Green-function sums need sphere dimension n >= 3")
    q = np.atleast_2d(np.asarray(q, dtype=np.float64))
    if q.shape[1] != n + 1:
        raise DegenerateTriple(f"points live in R^{q.shape[1]}, expected R^{n + 1}")
    return kernels.inv_power_sums(q, orb.points, None, n - 2)


def green_sphere(orb: Orbit, n: int, q) -> GreenEval:
    """Green function of the quotient at the orbit's base point, evaluated at q."""
    values, nearest = green_values(orb, n, q)
    if float(nearest[0]) <= ORBIT_TOL:
        raise OnOrbit(f"evaluation point within {ORBIT_TOL} of an orbit point")
    return GreenEval(value=float(values[0]), nearest_chord=float(nearest[0]))


def green_transform_check(chart: Chart, q, r) -> float:
    """Residual of the chart transformation law of the Green function.

    Compares 1/|sigma(r) - sigma(q)|^(n-2) against
    (|q - p| |r - p| / |r - q|)^(n-2); both sides agree exactly in this chart
    gauge, so the residual is pure floating-point noise for well-separated
    triples.
    """
    q = np.asarray(q, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    p = chart.base
    dqp = float(np.linalg.norm(q - p))
    drp = float(np.linalg.norm(r - p))
    drq = float(np.linalg.norm(r - q))
    if min(dqp, drp, drq) <= TRIPLE_TOL:
        raise DegenerateTriple("two points of the triple coincide")
    sq, sr = stereo_project_many(chart, np.stack([q, r]))
    e = chart.n - 2
    lhs = 1.0 / float(np.linalg.norm(sr - sq)) ** e
    rhs = (dqp * drp / drq) ** e
    return abs(lhs - rhs)

"""Multi-center conformally flat data built from a finite isometry group orbit.

Projecting the orbit of the base point p through the stereographic chart at p
turns the quotient-sphere geometry into a Majumdar-Papapetrou metric on R^n
minus finitely many centers:

    g = u^(4/(n-2)) * (flat metric),   u(x) = 1 + sum_j m_j / |x - c_j|^(n-2),

with one term per nontrivial group element: mass m = 1/chord^(n-2) for the
chord |p - gamma(p)|, center c = chart coordinates of gamma(p). The sum u is
harmonic away from the centers, so the metric is scalar-flat.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum

import numpy as np

from . import kernels
from ._format import fmt, fmt_matrix, fmt_vector
from .errors import AtSingularity, BadParameters, DimensionTooSmall
from .groups import IsometryGroup, orbit
from .sphere import Chart, chart_for, stereo_project_many

MIN_DIM = 3
MAX_DIM = 8
CENTER_TOL = 1e-9   # exclusion-ball radius around each center


@dataclass(frozen=True, eq=False)
class MPData:
    """Masses and centers of the multi-center metric, with the chart that produced them."""

    n: int
    chart: Chart
    masses: np.ndarray    # (order - 1,)
    centers: np.ndarray   # (order - 1, n)
    group: IsometryGroup

    @property
    def terms(self) -> list:
        """(mass, center) pairs, ordered like the nontrivial group elements."""
        return list(zip(self.masses.tolist(), list(self.centers)))


def build_mp(group: IsometryGroup, p) -> MPData:
    """Masses and centers for the quotient by `group`, based at p.

    mass_gamma = 1/|p - gamma(p)|^(n-2) and center_gamma = sigma_p(gamma(p))
    for every nontrivial gamma. Requires 3 <= n <= 8 and a base point that no
    nontrivial element fixes.
    """
    n = group.dim
    if n < MIN_DIM:
        raise DimensionTooSmall(
            f"need sphere dimension n >= {MIN_DIM}, got n = {n} "
            "(the conformal exponent 4/(n-2) degenerates)"
        )
    if n > MAX_DIM:
        raise BadParameters(f"sphere dimension {n} above supported range {MAX_DIM}")
    orb = orbit(group, p)
    chart = chart_for(orb.base)
    masses = 1.0 / orb.chords[1:] ** (n - 2)
    if group.order > 1:
        centers = stereo_project_many(chart, orb.points[1:])
    else:
        centers = np.zeros((0, n))
    masses.setflags(write=False)
    centers.setflags(write=False)
    return MPData(n=n, chart=chart, masses=masses, centers=centers, group=group)


def u_values(mp: MPData, x) -> tuple[np.ndarray, np.ndarray]:
    """Batch conformal factor u over rows of x; returns (u, nearest center distance).

    Does not police the singularity precondition; callers use the nearest
    distances for rejection or flagging.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != mp.n:
        raise BadParameters(f"chart points live in R^{x.shape[1]}, expected R^{mp.n}")
    sums, nearest = kernels.inv_power_sums(x, mp.centers, mp.masses, mp.n - 2)
    return 1.0 + sums, nearest


def conformal_factor_u(mp: MPData, x) -> float:
    """Conformal factor u(x) = 1 + sum_j m_j / |x - c_j|^(n-2)."""
    values, nearest = u_values(mp, x)
    if float(nearest[0]) <= CENTER_TOL:
        raise AtSingularity(f"point within {CENTER_TOL} of a center")
    return float(values[0])


def metric_at(mp: MPData, x) -> np.ndarray:
    """Metric tensor u(x)^(4/(n-2)) * I in chart coordinates."""
    u = conformal_factor_u(mp, x)
    return u ** (4.0 / (mp.n - 2)) * np.eye(mp.n)


def total_mass(mp: MPData) -> float:
    """Sum of the masses; equals the constant term of the Green function at its pole."""
    return fsum(sorted(mp.masses.tolist()))


def mpdata_to_json(mp: MPData) -> str:
    """Serialize to the stable JSON schema (17 significant digits, fixed field order)."""
    terms = ", ".join(
        "{" + f'"mass": {fmt(m)}, "center": {fmt_vector(c)}' + "}"
        for m, c in zip(mp.masses, mp.centers)
    )
    return (
        "{"
        + f'"n": {mp.n}, '
        + f'"chart": {{"base": {fmt_vector(mp.chart.base)}, "frame": {fmt_matrix(mp.chart.frame)}}}, '
        + f'"terms": [{terms}], '
        + f'"total_mass": {fmt(total_mass(mp))}'
        + "}"
    )

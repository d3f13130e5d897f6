"""Points on the round sphere and the inversion-based stereographic chart.

The chart at a pole p is the unit inversion q -> p + (q - p)/|q - p|^2, whose
image is the affine plane <x, p> = 1/2. Chart coordinates are taken relative
to the plane point p/2 in a deterministic orthonormal frame of the orthogonal
complement of p, so the chart is an isometry onto R^n. In this gauge the
inversion distance identity

    |sigma(q) - sigma(r)| = |q - r| / (|q - p| |r - p|)

holds with no scale factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameters, PoleProjection

UNIT_TOL = 1e-12
ORTH_TOL = 1e-10
POLE_TOL = 1e-9


def unit_vector(coords) -> np.ndarray:
    """Validate a vector as a sphere point; returns a float copy."""
    q = np.array(coords, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] < 2:
        raise BadParameters("a sphere point must be a vector of length >= 2")
    norm = float(np.linalg.norm(q))
    if abs(norm - 1.0) > UNIT_TOL:
        raise BadParameters(f"not a unit vector: |q| = {norm!r}")
    return q


def is_orthogonal(m, tol: float = ORTH_TOL) -> bool:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.abs(m.T @ m - np.eye(m.shape[0])).max()) <= tol


def apply_isometry(m, q) -> np.ndarray:
    """Apply an orthogonal matrix to a sphere point."""
    return np.asarray(m, dtype=np.float64) @ np.asarray(q, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class Chart:
    """Stereographic coordinate system: the pole plus a frame of its orthogonal complement.

    base: (n+1,) unit vector (the pole p).
    frame: (n, n+1), rows orthonormal and orthogonal to base.
    """

    base: np.ndarray
    frame: np.ndarray

    @property
    def n(self) -> int:
        return self.frame.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.base.shape[0]


def chart_for(p) -> Chart:
    """Deterministic chart at pole p.

    The frame completes p to a basis from the standard basis vectors, dropping
    the axis where |p| has its largest entry, then orthonormalizes (two
    Gram-Schmidt passes). Reproducible across runs and platforms.
    """
    p = unit_vector(p)
    d = p.shape[0]
    drop = int(np.argmax(np.abs(p)))
    rows = []
    for k in (i for i in range(d) if i != drop):
        v = np.zeros(d)
        v[k] = 1.0
        for _ in range(2):
            v -= np.dot(v, p) * p
            for f in rows:
                v -= np.dot(v, f) * f
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            raise BadParameters("degenerate frame pivot")
        rows.append(v / norm)
    frame = np.array(rows)
    p.setflags(write=False)
    frame.setflags(write=False)
    return Chart(base=p, frame=frame)


def sphere_inversion(p, q) -> np.ndarray:
    """Unit inversion centered at p, applied to rows of q (ambient coordinates)."""
    q = np.asarray(q, dtype=np.float64)
    w = q - p
    return p + w / np.sum(w * w, axis=-1, keepdims=True)


def stereo_project_many(chart: Chart, q) -> np.ndarray:
    """Chart coordinates of a batch of sphere points (rows)."""
    q = np.atleast_2d(np.asarray(q, dtype=np.float64))
    w = q - chart.base
    d2 = np.sum(w * w, axis=-1)
    if d2.size and float(d2.min()) <= POLE_TOL ** 2:
        raise PoleProjection("point coincides with the chart pole")
    img = chart.base + w / d2[:, None]
    return (img - chart.base / 2) @ chart.frame.T


def stereo_project(chart: Chart, q) -> np.ndarray:
    """Chart coordinates of a sphere point q != pole."""
    return stereo_project_many(chart, q)[0]


def stereo_unproject_many(chart: Chart, x) -> np.ndarray:
    """Sphere points for a batch of chart coordinates (rows)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    plane = chart.base / 2 + x @ chart.frame
    w = plane - chart.base
    return chart.base + w / np.sum(w * w, axis=-1, keepdims=True)


def stereo_unproject(chart: Chart, x) -> np.ndarray:
    """Sphere point whose chart coordinates are x; the chart origin maps to the antipode."""
    return stereo_unproject_many(chart, x)[0]


def conformal_factor_inverse(chart: Chart, x) -> float:
    """Conformal factor of the inverse chart map at x: 1 / (1/4 + |x|^2).

    Equals |q - p|^2 for q = stereo_unproject(chart, x); the round metric
    pulled back to the chart is this factor squared times the flat metric.
    """
    x = np.asarray(x, dtype=np.float64)
    return float(1.0 / (0.25 + x @ x))

"""Numerical verification checks for the multi-center construction.

Five checks, each returning a VerificationReport:

* pullback        -- the master identity G(q) * |q - p|^(n-2) = u(sigma(q))
                     on random sphere points.
* harmonic        -- the analytic Laplacian of u vanishes off the centers
                     (trace of the exact Hessian), plus a finite-difference
                     cross-check of the convergence order.
* deck isometry   -- the conjugated group action on the chart preserves the
                     metric: u(tau(x)) * mu^((n-2)/2) = u(x) with mu the
                     conformal stretch of tau measured from a finite-difference
                     Jacobian.
* deck algebra    -- deck maps permute the centers by the product table and
                     compose by it.
* mass limit      -- the Green function minus its own pole term tends to the
                     total mass.

Reports are deterministic for a given (seed, samples): sampling uses the
counter-based Philox generator and reductions run in fixed order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import fsum, log2

import numpy as np

from ._format import fmt, fmt_bool, fmt_str
from .errors import BadParameters, DimensionTooSmall
from .green import green_sphere, green_values
from .groups import IsometryGroup, orbit
from .kernels import thread_count
from .mp import MPData, u_values
from .sphere import chart_for, stereo_project_many, stereo_unproject_many

PULLBACK_TOL = 1e-10
HARMONIC_TOL = 1e-9
FD_ORDER_MIN = 1.8
DECK_TOL = 1e-7
DECK_ALGEBRA_TOL = 1e-10
MASS_TOL = 1e-6

ORBIT_REJECT = 1e-6        # rejection radius around orbit points (sphere side)
EXCLUSION_FACTOR = 0.05    # exclusion-ball factor around centers (chart side)
RMAX = 1e3                 # cap on |x| for chart-side sampling
DECK_STEP = 1e-4           # FD step factor for deck Jacobians
FD_STEP = 1e-2             # FD step factor for the Laplacian order check
DEFAULT_RADII = tuple(0.2 / 2 ** k for k in range(7))


@dataclass(frozen=True)
class VerificationReport:
    """Residual statistics of one check; `passed` serializes as the JSON key "pass"."""

    check_name: str
    samples: int
    max_residual: float
    mean_residual: float
    tolerance: float
    passed: bool
    skipped: bool = False

    def to_json(self) -> str:
        return (
            "{"
            + f'"check": {fmt_str(self.check_name)}, '
            + f'"samples": {self.samples}, '
            + f'"max_residual": {fmt(self.max_residual)}, '
            + f'"mean_residual": {fmt(self.mean_residual)}, '
            + f'"tolerance": {fmt(self.tolerance)}, '
            + f'"pass": {fmt_bool(self.passed)}, '
            + f'"skipped": {fmt_bool(self.skipped)}'
            + "}"
        )


def _report(name, residuals, tolerance) -> VerificationReport:
    res = np.asarray(residuals, dtype=np.float64)
    worst = float(res.max()) if res.size else 0.0
    mean = float(res.mean()) if res.size else 0.0
    return VerificationReport(
        check_name=name,
        samples=int(res.size),
        max_residual=worst,
        mean_residual=mean,
        tolerance=tolerance,
        passed=worst <= tolerance,
    )


def _skipped(name, tolerance) -> VerificationReport:
    return VerificationReport(
        check_name=name,
        samples=0,
        max_residual=0.0,
        mean_residual=0.0,
        tolerance=tolerance,
        passed=True,
        skipped=True,
    )


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed)))


def _sample_sphere(rng, count, ambient_dim) -> np.ndarray:
    g = rng.standard_normal((count, ambient_dim))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms < 1e-12] = 1.0
    return g / norms


def _chunked(fn, rows: np.ndarray, min_chunk: int = 512) -> np.ndarray:
    """Apply fn to row chunks, optionally in parallel, concatenating in index order."""
    workers = thread_count()
    m = len(rows)
    if workers <= 1 or m < 2 * min_chunk:
        return fn(rows)
    bounds = list(range(0, m, min_chunk))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda a: fn(rows[a:a + min_chunk]), bounds))
    return np.concatenate(parts)


def exclusion_radius(mp: MPData) -> float:
    """Sampler keep-out radius around each center.

    0.05 times the nearest center-pair distance; with fewer than two centers
    the construction scale 1.0 stands in for the pair distance.
    """
    k = len(mp.centers)
    if k < 2:
        return EXCLUSION_FACTOR
    diff = mp.centers[:, None, :] - mp.centers[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    dist[np.arange(k), np.arange(k)] = np.inf
    return EXCLUSION_FACTOR * float(dist.min())


def _sample_chart(mp: MPData, rng, count):
    """Chart points from uniform sphere samples, outside exclusion balls, |x| <= RMAX.

    Returns (points, nearest center distances).
    """
    excl = exclusion_radius(mp)
    xs, ds = [], []
    have = 0
    while have < count:
        q = _sample_sphere(rng, max(2 * (count - have), 64), mp.chart.ambient_dim)
        gap = np.linalg.norm(q - mp.chart.base, axis=1)
        q = q[gap > 1e-6]
        x = stereo_project_many(mp.chart, q)
        _, nearest = u_values(mp, x)
        keep = (nearest > excl) & (np.linalg.norm(x, axis=1) <= RMAX)
        xs.append(x[keep])
        ds.append(nearest[keep])
        have += int(keep.sum())
    x = np.concatenate(xs)[:count]
    d = np.concatenate(ds)[:count]
    return x, d


def check_pullback(mp: MPData, samples: int = 1000, seed: int = 42) -> VerificationReport:
    """Relative residual of G(q) * |q - p|^(n-2) = u(sigma(q)) on random sphere points."""
    if samples < 1:
        raise BadParameters("samples must be >= 1")
    rng = _rng(seed)
    n = mp.n
    p = mp.chart.base
    orb = orbit(mp.group, p)

    accepted = []
    have = 0
    while have < samples:
        q = _sample_sphere(rng, max(2 * (samples - have), 64), mp.chart.ambient_dim)
        _, nearest = green_values(orb, n, q)
        q = q[nearest > ORBIT_REJECT]
        accepted.append(q)
        have += len(q)
    q = np.concatenate(accepted)[:samples]

    def residuals(rows):
        g, _ = green_values(orb, n, rows)
        lhs = g * np.linalg.norm(rows - p, axis=1) ** (n - 2)
        u, _ = u_values(mp, stereo_project_many(mp.chart, rows))
        return np.abs(lhs - u) / u

    res = _chunked(residuals, q)
    return _report("pullback", res, PULLBACK_TOL)


def _u_hessian(mp: MPData, x: np.ndarray) -> np.ndarray:
    """Exact Hessian of u at rows of x, summed over the kernel terms."""
    n = mp.n
    eye = np.eye(n)
    h = np.zeros((len(x), n, n))
    for c, m in zip(mp.centers, mp.masses):
        w = x - c
        s = np.linalg.norm(w, axis=1)
        a = s ** (-n)
        b = s ** (-n - 2)
        h += m * (2 - n) * (
            a[:, None, None] * eye - n * b[:, None, None] * w[:, :, None] * w[:, None, :]
        )
    return h


def _fd_laplacian(mp: MPData, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    n = mp.n
    u0, _ = u_values(mp, x)
    total = np.zeros(len(x))
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        up, _ = u_values(mp, x + h[:, None] * e)
        dn, _ = u_values(mp, x - h[:, None] * e)
        total += (up - 2.0 * u0 + dn) / h ** 2
    return total


def check_harmonic(mp: MPData, samples: int = 1000, seed: int = 42) -> VerificationReport:
    """Trace of the exact Hessian of u, relative to its Frobenius norm."""
    if samples < 1:
        raise BadParameters("samples must be >= 1")
    x, _ = _sample_chart(mp, _rng(seed), samples)
    hess = _u_hessian(mp, x)
    trace = np.einsum("mkk->m", hess)
    scale = np.linalg.norm(hess, axis=(1, 2))
    res = np.abs(trace) / np.where(scale > 0, scale, 1.0)
    return _report("harmonic_analytic", res, HARMONIC_TOL)


def check_harmonic_fd(mp: MPData, samples: int = 200, seed: int = 42) -> VerificationReport:
    """Convergence order of the finite-difference Laplacian of u under step halving.

    The report residual is max(0, 2 - observed order) with tolerance
    2 - FD_ORDER_MIN, so passing means the observed order is at least 1.8.
    """
    if samples < 1:
        raise BadParameters("samples must be >= 1")
    x, dmin = _sample_chart(mp, _rng(seed), samples)
    h = FD_STEP * np.where(np.isfinite(dmin), dmin, 1.0)
    scale = np.linalg.norm(_u_hessian(mp, x), axis=(1, 2))
    scale = np.where(scale > 0, scale, 1.0)
    rms1 = float(np.sqrt(np.mean((_fd_laplacian(mp, x, h) / scale) ** 2)))
    rms2 = float(np.sqrt(np.mean((_fd_laplacian(mp, x, h / 2) / scale) ** 2)))
    if rms2 == 0.0:
        order = np.inf
    elif rms1 == 0.0:
        order = 0.0
    else:
        order = log2(rms1 / rms2)
    residual = max(0.0, 2.0 - order)
    return VerificationReport(
        check_name="harmonic_fd_order",
        samples=int(len(x)),
        max_residual=residual,
        mean_residual=residual,
        tolerance=2.0 - FD_ORDER_MIN,
        passed=residual <= 2.0 - FD_ORDER_MIN,
    )


@dataclass(frozen=True, eq=False)
class DeckMap:
    """Action of one group element conjugated through the chart: x -> sigma(gamma(sigma^{-1}(x))).

    Singular where gamma sends the unprojected point to the pole, i.e. at the
    center indexed by the inverse element; composition follows the product table.
    """

    group: IsometryGroup
    chart: object
    index: int

    @property
    def matrix(self) -> np.ndarray:
        return self.group.elements[self.index]

    def apply_many(self, x) -> np.ndarray:
        q = stereo_unproject_many(self.chart, x)
        return stereo_project_many(self.chart, q @ self.matrix.T)

    def __call__(self, x) -> np.ndarray:
        return self.apply_many(np.atleast_2d(np.asarray(x, dtype=np.float64)))[0]


def deck_map(mp: MPData, index: int) -> DeckMap:
    if not 0 <= index < mp.group.order:
        raise BadParameters(f"element index {index} out of range")
    return DeckMap(group=mp.group, chart=mp.chart, index=index)


def check_deck_isometry(mp: MPData, samples: int = 200, seed: int = 42) -> VerificationReport:
    """Deck maps preserve the metric: u(tau(x)) * mu^((n-2)/2) = u(x).

    The conformal stretch mu comes from a finite-difference Jacobian
    (step DECK_STEP times the distance to the nearest center), and the
    Jacobian's conformality |J^T J - mu^2 I| / mu^2 is folded into the same
    residual, so both contracts are enforced at the report tolerance.
    """
    if mp.group.order == 1:
        return _skipped("deck_isometry", DECK_TOL)
    if samples < 1:
        raise BadParameters("samples must be >= 1")
    n = mp.n
    x, dmin = _sample_chart(mp, _rng(seed), samples)
    h = DECK_STEP * dmin
    ux, _ = u_values(mp, x)
    eye = np.eye(n)
    residuals = []
    for gi in range(1, mp.group.order):
        dm = deck_map(mp, gi)
        jac = np.empty((len(x), n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = 1.0
            plus = dm.apply_many(x + h[:, None] * e)
            minus = dm.apply_many(x - h[:, None] * e)
            jac[:, :, k] = (plus - minus) / (2.0 * h[:, None])
        gram = np.einsum("mij,mik->mjk", jac, jac)
        mu2 = np.einsum("mkk->m", gram) / n
        conf = np.abs(gram - mu2[:, None, None] * eye).max(axis=(1, 2)) / mu2
        ut, _ = u_values(mp, dm.apply_many(x))
        iso = np.abs(ut * mu2 ** ((n - 2) / 4.0) - ux) / ux
        residuals.append(conf)
        residuals.append(iso)
    return _report("deck_isometry", np.concatenate(residuals), DECK_TOL)


def check_deck_algebra(mp: MPData, samples: int = 200, seed: int = 42) -> VerificationReport:
    """Deck maps permute the centers by the product table and compose by it.

    Center permutation: tau_g(c_b) = c_(g b) whenever g b is nontrivial (the
    remaining pair maps to infinity and has no chart representative).
    Composition: tau_g(tau_b(x)) = tau_(g b)(x) on sample points whose
    intermediate image stays clear of the centers and the RMAX cap.
    """
    if mp.group.order == 1:
        return _skipped("deck_algebra", DECK_ALGEBRA_TOL)
    if samples < 1:
        raise BadParameters("samples must be >= 1")
    order = mp.group.order
    cayley = mp.group.cayley
    excl = exclusion_radius(mp)
    residuals = []

    maps = [deck_map(mp, gi) for gi in range(order)]
    for gi in range(1, order):
        for bi in range(1, order):
            prod = int(cayley[gi, bi])
            if prod == 0:
                continue
            got = maps[gi].apply_many(mp.centers[bi - 1])[0]
            residuals.append(float(np.linalg.norm(got - mp.centers[prod - 1])))

    x, _ = _sample_chart(mp, _rng(seed), samples)
    for gi in range(1, order):
        for bi in range(1, order):
            mid = maps[bi].apply_many(x)
            _, mid_near = u_values(mp, mid)
            keep = (mid_near > excl) & (np.linalg.norm(mid, axis=1) <= RMAX)
            if not keep.any():
                continue
            lhs = maps[gi].apply_many(mid[keep])
            rhs = maps[int(cayley[gi, bi])].apply_many(x[keep])
            residuals.extend(np.linalg.norm(lhs - rhs, axis=1).tolist())
    return _report("deck_algebra", residuals, DECK_ALGEBRA_TOL)


def _neville_at_zero(ts, fs) -> float:
    vals = [float(f) for f in fs]
    ts = [float(t) for t in ts]
    k = len(vals)
    for level in range(1, k):
        vals = [
            (ts[i + level] * vals[i] - ts[i] * vals[i + 1]) / (ts[i + level] - ts[i])
            for i in range(k - level)
        ]
    return vals[0]


def check_mass_limit(group: IsometryGroup, p, radii=DEFAULT_RADII) -> VerificationReport:
    """Extrapolated limit of G(q) - |q - p|^(2-n) along a geodesic approach to p.

    Richardson (Neville) extrapolation of the values at the given decreasing
    geodesic radii, compared against the sum of the masses.
    """
    radii = [float(t) for t in radii]
    if len(radii) < 2:
        raise BadParameters("need at least two radii")
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise BadParameters("radii must be strictly decreasing")
    if radii[-1] <= 1e-6:
        raise BadParameters("radii must stay above 1e-6")
    n = group.dim
    if n < 3:
        raise DimensionTooSmall("mass limit needs sphere dimension n >= 3")
    orb = orbit(group, p)
    direction = chart_for(orb.base).frame[0]

    values = []
    for t in radii:
        q = np.cos(t) * orb.base + np.sin(t) * direction
        g = green_sphere(orb, n, q)
        values.append(g.value - float(np.linalg.norm(q - orb.base)) ** (2 - n))
    limit = _neville_at_zero(radii, values)
    total = fsum(sorted((1.0 / orb.chords[1:] ** (n - 2)).tolist()))
    residual = abs(limit - total)
    return VerificationReport(
        check_name="mass_limit",
        samples=len(radii),
        max_residual=residual,
        mean_residual=residual,
        tolerance=MASS_TOL,
        passed=residual <= MASS_TOL,
    )

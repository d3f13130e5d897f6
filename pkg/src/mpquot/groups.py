"""Finite subgroups of the orthogonal group and their orbits on the sphere."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import (
    AmbiguousGenerators,
    BadParameters,
    NotOrthogonal,
    OrderExceeded,
    SingularBasePoint,
)
from .sphere import is_orthogonal, unit_vector

ELEMENT_TOL = 1e-10      # entrywise distance at or below which two elements are equal
AMBIGUOUS_TOL = 1e-8     # distances in (ELEMENT_TOL, AMBIGUOUS_TOL) abort the closure
FREE_CHORD_TOL = 1e-6
DEFAULT_MAX_ORDER = 10_000


class IsometryGroup:
    """Finite matrix group acting on S^n through (n+1)x(n+1) orthogonal matrices.

    elements[0] is the identity. cayley[i, j] is the index of
    elements[i] @ elements[j]; inverse_index(i) reads it off the table.
    """

    def __init__(self, dim: int, elements, cayley):
        self.dim = int(dim)
        self.elements = np.ascontiguousarray(elements, dtype=np.float64)
        self.cayley = np.ascontiguousarray(cayley, dtype=np.intp)
        if self.elements.ndim != 3 or self.elements.shape[1] != self.dim + 1:
            raise BadParameters("elements must be (N, n+1, n+1) for sphere dimension n")
        if self.cayley.shape != (self.order, self.order):
            raise BadParameters("cayley table shape mismatch")
        self.elements.setflags(write=False)
        self.cayley.setflags(write=False)

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.dim + 1

    def __len__(self) -> int:
        return self.order

    def inverse_index(self, i: int) -> int:
        hits = np.nonzero(self.cayley[i] == 0)[0]
        return int(hits[0])

    def __repr__(self) -> str:
        return f"IsometryGroup(dim={self.dim}, order={self.order})"


def _nearest_element(stack: np.ndarray, count: int, cand: np.ndarray):
    """Index of the closest stored element and the entrywise distance to it."""
    if count == 0:
        return -1, np.inf
    diffs = np.abs(stack[:count] - cand).max(axis=(1, 2))
    i = int(diffs.argmin())
    return i, float(diffs[i])


def close_group(generators, max_order: int = DEFAULT_MAX_ORDER) -> IsometryGroup:
    """Close a generator list under products into a finite group.

    Element equality is decided entrywise at ELEMENT_TOL; candidates landing in
    the ambiguous band (ELEMENT_TOL, AMBIGUOUS_TOL) abort with
    AmbiguousGenerators, which signals ill-conditioned generators rather than
    silently merging near-equal rotations. Raises OrderExceeded once the
    closure grows past max_order.
    """
    gens = [np.array(g, dtype=np.float64) for g in generators]
    if not gens:
        raise BadParameters("need at least one generator")
    d = gens[0].shape[0]
    if max_order < 1:
        raise BadParameters("max_order must be >= 1")
    for g in gens:
        if g.shape != (d, d):
            raise BadParameters("generators must share one square shape")
        if not is_orthogonal(g):
            raise NotOrthogonal("generator fails the orthogonality check")

    capacity = 64
    stack = np.empty((capacity, d, d))
    count = 0

    def add(cand):
        nonlocal stack, count
        _, dist = _nearest_element(stack, count, cand)
        if dist <= ELEMENT_TOL:
            return False
        if dist < AMBIGUOUS_TOL:
            raise AmbiguousGenerators(
                f"elements at entrywise distance {dist:.3e} are neither equal nor distinct"
            )
        if count == capacity:
            stack = np.concatenate([stack, np.empty_like(stack)])
        stack[count] = cand
        count += 1
        return True

    add(np.eye(d))
    queue = [np.eye(d)]
    for g in gens:
        if add(g):
            queue.append(g)
    while queue:
        m = queue.pop()
        for g in gens:
            cand = m @ g
            if count >= max_order and _nearest_element(stack, count, cand)[1] > ELEMENT_TOL:
                raise OrderExceeded(f"closure exceeds max_order = {max_order}")
            if add(cand):
                queue.append(cand)

    elements = stack[:count].copy()
    return IsometryGroup(d - 1, elements, _cayley_table(elements))


def _cayley_table(elements: np.ndarray) -> np.ndarray:
    n = elements.shape[0]
    flat = elements.reshape(n, -1)
    table = np.empty((n, n), dtype=np.intp)
    chunk = max(1, 2_000_000 // max(1, n * flat.shape[1]))
    for i in range(n):
        products = (elements[i] @ elements).reshape(n, -1)
        for a in range(0, n, chunk):
            block = products[a:a + chunk]
            dist = np.abs(block[:, None, :] - flat[None, :, :]).max(axis=2)
            idx = dist.argmin(axis=1)
            if float(dist[np.arange(len(block)), idx].max()) > ELEMENT_TOL:
                raise BadParameters("element set is not closed under products")
            table[i, a:a + chunk] = idx
    return table


def _plane_rotation(blocks) -> np.ndarray:
    """Block-diagonal matrix of 2x2 rotations by the given angles."""
    m = len(blocks)
    out = np.zeros((2 * m, 2 * m))
    for j, theta in enumerate(blocks):
        c, s = np.cos(theta), np.sin(theta)
        out[2 * j:2 * j + 2, 2 * j:2 * j + 2] = [[c, -s], [s, c]]
    return out


def named_group(family: str, dim: int | None = None, params=()) -> IsometryGroup:
    """Construct a named group family.

    trivial:   {I} on S^dim.
    antipodal: {I, -I} on S^dim.
    lens:      params = (k, l_1, ..., l_m); cyclic order k generated by
               simultaneous plane rotations through 2*pi*l_j/k, acting on
               S^{2m-1}. Every l_j must be coprime to k, so the action is free
               everywhere and the quotient is a manifold.
    """
    family = str(family).lower()
    if family == "trivial":
        if dim is None or dim < 1:
            raise BadParameters("trivial group needs a sphere dimension >= 1")
        d = dim + 1
        return IsometryGroup(dim, np.eye(d)[None, :, :], np.zeros((1, 1), dtype=np.intp))
    if family == "antipodal":
        if dim is None or dim < 1:
            raise BadParameters("antipodal group needs a sphere dimension >= 1")
        d = dim + 1
        elements = np.stack([np.eye(d), -np.eye(d)])
        return IsometryGroup(dim, elements, np.array([[0, 1], [1, 0]], dtype=np.intp))
    if family == "lens":
        if len(params) < 2:
            raise BadParameters("lens needs parameters (k, l_1, ..., l_m)")
        try:
            k = int(params[0])
            ls = [int(v) for v in params[1:]]
        except (TypeError, ValueError) as exc:
            raise BadParameters("lens parameters must be integers") from exc
        if k < 1:
            raise BadParameters("lens order k must be >= 1")
        for l in ls:
            if gcd(l % k if k > 1 else 1, k) != 1:
                raise BadParameters(f"lens parameter {l} is not coprime to {k}")
        n = 2 * len(ls) - 1
        if dim is not None and dim != n:
            raise BadParameters(f"lens({k}; {ls}) acts on S^{n}, not S^{dim}")
        # Power j built directly from the angles 2*pi*l*j/k: no product drift.
        elements = np.stack(
            [_plane_rotation([2.0 * np.pi * l * j / k for l in ls]) for j in range(k)]
        )
        cayley = (np.arange(k)[:, None] + np.arange(k)[None, :]) % k
        return IsometryGroup(n, elements, cayley.astype(np.intp))
    raise BadParameters(f"unknown group family: {family!r}")


def product_group(a: IsometryGroup, b: IsometryGroup) -> IsometryGroup:
    """Block-diagonal product of two groups acting on orthogonal coordinate blocks."""
    da, db = a.ambient_dim, b.ambient_dim
    d = da + db
    na, nb = a.order, b.order
    elements = np.zeros((na * nb, d, d))
    for i in range(na):
        for j in range(nb):
            elements[i * nb + j, :da, :da] = a.elements[i]
            elements[i * nb + j, da:, da:] = b.elements[j]
    cayley = (
        a.cayley[:, None, :, None] * nb + b.cayley[None, :, None, :]
    ).reshape(na * nb, na * nb)
    return IsometryGroup(d - 1, elements, cayley)


def group_from_spec(spec: dict) -> IsometryGroup:
    """Build a group from the JSON specification.

    {"dim": n, "family": "antipodal" | "lens" | "trivial" | "generators",
     "params": [...], "generators": [[...row-major matrices...]]}

    For "generators", each matrix is a row-major flat list of (n+1)^2 entries
    (nested rows are also accepted) and params may carry [max_order].
    """
    if not isinstance(spec, dict):
        raise BadParameters("group spec must be a JSON object")
    family = str(spec.get("family", "")).lower()
    dim = spec.get("dim")
    params = spec.get("params", [])
    if family in ("trivial", "antipodal", "lens"):
        return named_group(family, dim=dim, params=params)
    if family == "generators":
        raw = spec.get("generators")
        if not raw:
            raise BadParameters("generators family needs a non-empty 'generators' list")
        if dim is None:
            raise BadParameters("generators family needs 'dim'")
        d = int(dim) + 1
        mats = []
        for entry in raw:
            m = np.array(entry, dtype=np.float64)
            if m.ndim == 1:
                if m.size != d * d:
                    raise BadParameters(f"flat generator needs {d * d} entries, got {m.size}")
                m = m.reshape(d, d)
            if m.shape != (d, d):
                raise BadParameters("generator shape does not match dim")
            mats.append(m)
        max_order = int(params[0]) if params else DEFAULT_MAX_ORDER
        return close_group(mats, max_order=max_order)
    raise BadParameters(f"unknown group family: {family!r}")


@dataclass(frozen=True, eq=False)
class Orbit:
    """Orbit of a base point: points[i] = elements[i] @ base, chords[i] = |base - points[i]|."""

    base: np.ndarray
    points: np.ndarray
    chords: np.ndarray


def orbit(group: IsometryGroup, p) -> Orbit:
    """Orbit of p under the group; requires p to be free (all nontrivial chords > 1e-6)."""
    p = unit_vector(p)
    if p.shape[0] != group.ambient_dim:
        raise BadParameters(
            f"base point lives in R^{p.shape[0]}, group acts on R^{group.ambient_dim}"
        )
    points = group.elements @ p
    chords = np.linalg.norm(points - p, axis=1)
    if group.order > 1 and float(chords[1:].min()) <= FREE_CHORD_TOL:
        worst = int(chords[1:].argmin()) + 1
        raise SingularBasePoint(
            f"element {worst} moves the base point by only {chords[worst]:.3e}"
        )
    for arr in (p, points, chords):
        arr.setflags(write=False)
    return Orbit(base=p, points=points, chords=chords)

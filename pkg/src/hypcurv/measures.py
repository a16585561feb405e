"""Discrete measures on S^m and the admissibility condition checkers.

A finite measure with positive atoms is admissible as a curvature measure
exactly when three conditions hold: its total mass exceeds the sphere's, no
atom carries half the sphere's measure or more, and for every proper convex
subset omega the polar set omega* satisfies sigma(omega*) < mu(complement of
omega).  For a discrete measure the last condition only needs to be tested on
spherical hulls of subsets of the support: any convex omega meets the same
support points as the hull of (omega intersect support), and shrinking omega
to that hull only enlarges the polar, so the minimum slack over subset hulls
equals the true infimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.spatial.distance import pdist

from .minkowski import sphere_measure, validate_dimension

# A condition passes only with margin above this fraction of the sphere measure.
COND_EPS_FACTOR = 1e-9

# Points within this slack of a hull's boundary count as contained.
_CONTAIN_EPS = 1e-10

_FULL = "full"
_ARC = "arc"
_CONE = "cone"


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported measure: unit points on S^m with positive weights."""

    m: int
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        validate_dimension(self.m)
        points = np.asarray(self.points, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.m + 1:
            raise ValueError(f"points must have shape (N, {self.m + 1})")
        if weights.shape != (points.shape[0],):
            raise ValueError("weights must match the number of points")
        norms = np.linalg.norm(points, axis=1)
        if np.abs(norms - 1.0).max() > 1e-8:
            raise ValueError("support points must be unit vectors")
        points = points / norms[:, None]
        if not np.all(np.isfinite(weights)) or weights.min() <= 0:
            raise ValueError("weights must be positive and finite")
        if points.shape[0] > 1 and pdist(points).min() <= 1e-9:
            raise ValueError("support points must be pairwise more than 1e-9 apart")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights.copy())
        self.points.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def total(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class SphericalConvexSet:
    """Spherical hull of a point set, or the FULL_SPHERE marker.

    m=1 hulls are arcs stored as (start angle, length); m=2 hulls carry the
    generators of the dual cone (for membership tests), the ordered extreme
    rays, and the precomputed polar area.
    """

    m: int
    kind: str                       # "arc", "cone" or "full"
    arc_start: float = 0.0
    arc_length: float = 0.0
    extreme_rays: np.ndarray | None = None
    dual_generators: np.ndarray | None = None
    polar_area: float = 0.0

    @property
    def is_full(self) -> bool:
        return self.kind == _FULL

    def contains(self, q: np.ndarray) -> bool:
        q = np.asarray(q, dtype=float)
        if self.is_full:
            return True
        if self.m == 1:
            ang = float(np.arctan2(q[1], q[0]))
            rel = (ang - self.arc_start) % (2.0 * np.pi)
            return rel <= self.arc_length + _CONTAIN_EPS or rel >= 2.0 * np.pi - _CONTAIN_EPS
        if self.dual_generators is None or len(self.dual_generators) == 0:
            return True
        return bool(np.all(self.dual_generators @ q <= _CONTAIN_EPS))


def _arc_hull(points: np.ndarray) -> SphericalConvexSet:
    angles = np.sort(np.arctan2(points[:, 1], points[:, 0]) % (2.0 * np.pi))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
    widest = int(np.argmax(gaps))
    length = 2.0 * np.pi - gaps[widest]
    if length >= np.pi:
        return SphericalConvexSet(m=1, kind=_FULL)
    start = angles[(widest + 1) % len(angles)]
    return SphericalConvexSet(m=1, kind=_ARC, arc_start=float(start), arc_length=float(length))


def _dedupe_rows(rows: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    kept: list[np.ndarray] = []
    for r in rows:
        if all(np.linalg.norm(r - k) > tol for k in kept):
            kept.append(r)
    return np.asarray(kept)


def _plane_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    seed = np.eye(3)[np.argmin(np.abs(normal))]
    e1 = seed - (seed @ normal) * normal
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(normal, e1)


def _angular_span(angles: np.ndarray) -> float:
    """Width of the smallest sector containing all angles, in [0, 2*pi)."""
    angles = np.sort(angles % (2.0 * np.pi))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
    return float(2.0 * np.pi - gaps.max())


def _cone_hull(points: np.ndarray) -> SphericalConvexSet:
    """Spherical hull data for m=2 via the dual cone of the ray set."""
    pts = _dedupe_rows(points, tol=1e-12)
    u, s, vt = np.linalg.svd(pts, full_matrices=True)
    rank = int(np.sum(s > 1e-9 * s[0]))

    if rank == 1:
        direction = vt[0] * np.sign(vt[0] @ pts[0])
        if np.min(pts @ direction) < 0:  # antipodal pair: dual is a great circle
            e1, e2 = _plane_basis(direction)
            gens = np.array([e1, -e1, e2, -e2])
            return SphericalConvexSet(2, _CONE, extreme_rays=pts,
                                      dual_generators=gens, polar_area=0.0)
        e1, e2 = _plane_basis(direction)
        gens = np.array([-direction, e1, -e1, e2, -e2])
        return SphericalConvexSet(2, _CONE, extreme_rays=pts[:1],
                                  dual_generators=gens, polar_area=2.0 * np.pi)

    if rank == 2:
        normal = vt[2] / np.linalg.norm(vt[2])
        e1, e2 = _plane_basis(normal)
        ang = np.arctan2(pts @ e2, pts @ e1)
        span = _angular_span(ang)
        if span > np.pi:  # rays wrap more than a half turn: dual collapses
            gens = np.array([normal, -normal])
            return SphericalConvexSet(2, _CONE, extreme_rays=pts,
                                      dual_generators=gens, polar_area=0.0)
        # dual = wedge around +-normal; in-plane generators close the sector
        angles = np.sort(ang % (2.0 * np.pi))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
        widest = int(np.argmax(gaps))
        a_lo = angles[(widest + 1) % len(angles)]
        a_hi = a_lo + span
        g1 = np.cos(a_hi + 0.5 * np.pi) * e1 + np.sin(a_hi + 0.5 * np.pi) * e2
        g2 = np.cos(a_lo - 0.5 * np.pi) * e1 + np.sin(a_lo - 0.5 * np.pi) * e2
        gens = np.array([normal, -normal, g1, g2])
        area = 2.0 * max(0.0, np.pi - span)
        return SphericalConvexSet(2, _CONE, extreme_rays=pts,
                                  dual_generators=gens, polar_area=float(area))

    # rank 3: candidate dual rays are normals of support-plane pairs
    rays = []
    n = len(pts)
    for i, j in combinations(range(n), 2):
        cr = np.cross(pts[i], pts[j])
        norm = np.linalg.norm(cr)
        if norm < 1e-12:
            continue
        for cand in (cr / norm, -cr / norm):
            if np.max(pts @ cand) <= 1e-12:
                rays.append(cand)
    rays = _dedupe_rows(np.asarray(rays)) if rays else np.zeros((0, 3))
    if len(rays) == 0:
        return SphericalConvexSet(2, _FULL)
    if len(rays) < 3:
        return SphericalConvexSet(2, _CONE, extreme_rays=pts,
                                  dual_generators=rays, polar_area=0.0)
    center = rays.sum(axis=0)
    center /= np.linalg.norm(center)
    e1, e2 = _plane_basis(center)
    order = np.argsort(np.arctan2(rays @ e2, rays @ e1))
    rays = rays[order]
    from .bodies import spherical_polygon_area

    area = spherical_polygon_area(rays)
    return SphericalConvexSet(2, _CONE, extreme_rays=_extreme_subset(pts),
                              dual_generators=rays, polar_area=float(area))


def _extreme_subset(pts: np.ndarray) -> np.ndarray:
    """Extreme rays of the conical hull, ordered, for pointed full-rank input."""
    mean = pts.mean(axis=0)
    norm = np.linalg.norm(mean)
    if norm < 1e-12:
        return pts
    mean /= norm
    proj = pts @ mean
    if proj.min() <= 1e-12:
        return pts
    plane = pts / proj[:, None]
    try:
        from scipy.spatial import ConvexHull, QhullError

        e1, e2 = _plane_basis(mean)
        coords = np.column_stack([plane @ e1, plane @ e2])
        hull = ConvexHull(coords)
        return pts[hull.vertices]
    except Exception:
        return pts


def spherical_hull(points: np.ndarray, m: int | None = None) -> SphericalConvexSet:
    """Spherical convex hull of unit points, or FULL_SPHERE if it is everything."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("need a nonempty (N, m+1) point array")
    m = points.shape[1] - 1 if m is None else m
    validate_dimension(m)
    if points.shape[1] != m + 1:
        raise ValueError("point dimension does not match m")
    if m == 1:
        return _arc_hull(points)
    return _cone_hull(points)


def polar_sigma_area(omega: SphericalConvexSet) -> float:
    """Uniform measure of the polar set omega* = complement of the open
    pi/2-neighborhood of omega."""
    if omega.is_full:
        raise ValueError("the polar of the full sphere is empty; handle as 0 upstream")
    if omega.m == 1:
        return max(0.0, np.pi - omega.arc_length)
    return omega.polar_area


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the three admissibility tests, with margins and witnesses."""

    total_mass_ok: bool
    total_mass_excess: float
    vertex_ok: bool
    vertex_max_weight: float
    vertex_argmax: int
    alexandrov_ok: bool
    alexandrov_slack: float
    worst_witness: tuple
    exhaustive: bool

    @property
    def all_ok(self) -> bool:
        return self.total_mass_ok and self.vertex_ok and self.alexandrov_ok

    def to_dict(self) -> dict:
        return {
            "total_mass_ok": self.total_mass_ok,
            "total_mass_excess": self.total_mass_excess,
            "vertex_ok": self.vertex_ok,
            "vertex_max_weight": self.vertex_max_weight,
            "vertex_argmax": self.vertex_argmax,
            "alexandrov_ok": self.alexandrov_ok,
            "alexandrov_slack": self.alexandrov_slack,
            "worst_witness": list(self.worst_witness),
            "exhaustive": self.exhaustive,
            "all_ok": self.all_ok,
        }


def _alexandrov_m1(mu: DiscreteMeasure):
    """Exact minimal slack over arcs with endpoints at support points."""
    angles = np.arctan2(mu.points[:, 1], mu.points[:, 0]) % (2.0 * np.pi)
    total = mu.total
    best = np.inf
    witness: tuple = ()
    n = mu.size
    for i in range(n):
        for j in range(n):
            length = (angles[j] - angles[i]) % (2.0 * np.pi)
            if length >= np.pi:
                continue
            rel = (angles - angles[i]) % (2.0 * np.pi)
            inside = (rel <= length + _CONTAIN_EPS) | (rel >= 2.0 * np.pi - _CONTAIN_EPS)
            slack = (total - mu.weights[inside].sum()) - (np.pi - length)
            if slack < best - 1e-15:
                best = slack
                witness = tuple(sorted(int(t) for t in np.nonzero(inside)[0]))
    return best, witness


def _alexandrov_m2(mu: DiscreteMeasure, subsets):
    total = mu.total
    best = np.inf
    witness: tuple = ()
    for subset in subsets:
        idx = np.asarray(subset, dtype=int)
        hull = _cone_hull(mu.points[idx])
        if hull.is_full:
            continue
        gens = hull.dual_generators
        if gens is None or len(gens) == 0:
            continue
        inside = np.all(mu.points @ gens.T <= _CONTAIN_EPS, axis=1)
        slack = (total - mu.weights[inside].sum()) - hull.polar_area
        if slack < best - 1e-15:
            best = slack
            witness = tuple(int(t) for t in idx)
    return best, witness


def check_conditions(mu: DiscreteMeasure, mode: str = "exhaustive",
                     n_subsets: int = 4000, seed: int = 0) -> ConditionReport:
    """Run the three admissibility tests on a discrete measure.

    ``mode`` is "exhaustive" (all support subsets; refused for N > 20) or
    "sampled" (all singletons, all complements of singletons, and
    ``n_subsets`` random subsets).  m=1 always enumerates every arc with
    endpoints at support points, which is exact, so its report is marked
    exhaustive regardless of mode.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    validate_dimension(mu.m)
    sphere = sphere_measure(mu.m)
    eps = COND_EPS_FACTOR * sphere

    total_excess = mu.total - sphere
    total_ok = total_excess > eps
    vmax_idx = int(np.argmax(mu.weights))
    vmax = float(mu.weights[vmax_idx])
    vertex_ok = (0.5 * sphere - vmax) > eps

    if mu.m == 1:
        slack, witness = _alexandrov_m1(mu)
        exhaustive = True
    else:
        n = mu.size
        if mode == "exhaustive":
            if n > 20:
                raise ValueError(
                    "exhaustive subset enumeration refused for N > 20; use mode='sampled'"
                )
            subsets = []
            for size in range(1, n + 1):
                subsets.extend(combinations(range(n), size))
            exhaustive = True
        else:
            rng = np.random.default_rng(seed)
            chosen = {(i,) for i in range(n)}
            chosen |= {tuple(j for j in range(n) if j != i) for i in range(n)}
            for _ in range(n_subsets):
                mask = rng.random(n) < rng.uniform(0.15, 0.85)
                if mask.any():
                    chosen.add(tuple(int(i) for i in np.nonzero(mask)[0]))
            subsets = sorted(chosen)
            exhaustive = False
        slack, witness = _alexandrov_m2(mu, subsets)
    alexandrov_ok = bool(slack > eps)

    return ConditionReport(
        total_mass_ok=bool(total_ok),
        total_mass_excess=float(total_excess),
        vertex_ok=bool(vertex_ok),
        vertex_max_weight=vmax,
        vertex_argmax=vmax_idx,
        alexandrov_ok=alexandrov_ok,
        alexandrov_slack=float(slack),
        worst_witness=witness,
        exhaustive=exhaustive,
    )

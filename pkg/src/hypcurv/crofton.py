"""Monte-Carlo verification of polar-boundary areas by intersection counting.

Space-like geodesics of de Sitter space are parameterized as

    gamma(s) = cos(s) (sinh(h_a) o + cosh(h_a) xi_a) + sin(s) xi_b,

with xi_a, xi_b orthonormal sphere directions and h_a >= 0; such a geodesic
is dual to a totally geodesic submanifold of hyperbolic space through the
point at distance h_a from the basepoint in direction xi_a.  The kinematic
measure is sampled in these coordinates: for m=1 the dual objects are points
and the radial density is the hyperbolic area element; for m=2 they are
lines, parameterized by a plane through the basepoint and a foot point, and
the radial density acquires a cosh factor (the invariant line density).  The
m=2 normalization is calibrated by the concentric-ball oracle, for which the
area difference is known in closed form.

Intersection counts with a polytope's polar boundary reduce to an exact
two-dimensional cone test: in the variables u = (cos s, sin s) the sign of
t(s) - h(eta(s)) is the minimum of N linear forms, so the region above the
polar boundary is an arc whose endpoints are the crossing parameters.  A
partition-and-bisection fallback handles arbitrary support callables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import HyperbolicPolytope, support_fn
from .minkowski import sphere_measure, validate_dimension
from .quadrature import QuadratureGrid

# span within this of pi means the geodesic is tangent: excluded as unstable
_TANGENT_TOL = 1e-9

_CROFTON_FACTOR = {1: 0.5, 2: 1.0 / np.pi}  # m / |S^{m-1}|


@dataclass(frozen=True)
class GeodesicSample:
    """One space-like geodesic in foot-point coordinates."""

    m: int
    xi_a: np.ndarray
    h_a: float
    xi_b: np.ndarray

    @property
    def p(self) -> np.ndarray:
        """Dual foot point in hyperbolic space."""
        from .minkowski import hyperbolic_point

        return hyperbolic_point(self.xi_a, self.h_a)

    def point(self, s) -> np.ndarray:
        """gamma(s) in ambient Minkowski coordinates."""
        s = np.asarray(s, dtype=float)
        cprime = np.concatenate([[np.sinh(self.h_a)], np.cosh(self.h_a) * self.xi_a])
        xib = np.concatenate([[0.0], self.xi_b])
        return np.cos(s)[..., None] * cprime + np.sin(s)[..., None] * xib

    def cylinder(self, s) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates (t, eta) with gamma(s) = sinh(t) o + cosh(t) eta."""
        x = self.point(s)
        t = np.arcsinh(x[..., 0])
        eta = x[..., 1:] / np.cosh(t)[..., None]
        return t, eta


@dataclass(frozen=True)
class GeodesicSampleSet:
    """Batch of samples plus the kinematic measure of the sampled region."""

    m: int
    xi_a: np.ndarray
    h_a: np.ndarray
    xi_b: np.ndarray
    h_cap: float
    total_measure: float

    def __len__(self) -> int:
        return len(self.h_a)

    def __getitem__(self, i: int) -> GeodesicSample:
        return GeodesicSample(self.m, self.xi_a[i], float(self.h_a[i]), self.xi_b[i])


def sample_geodesics(m: int, n: int, h_cap: float, seed: int) -> GeodesicSampleSet:
    """Draw n geodesics from the kinematic measure truncated to h_a <= h_cap.

    m=1: the foot point is hyperbolic-area uniform in the disk of radius
    h_cap (radial law proportional to cosh(t) - 1), total measure
    2*pi*(cosh(h_cap) - 1).  m=2: the plane normal is uniform, the foot point
    follows the invariant line density cosh * sinh within the plane, total
    measure 2*pi^2*sinh^2(h_cap).
    """
    validate_dimension(m)
    if h_cap <= 0 or n <= 0:
        raise ValueError("h_cap and n must be positive")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    if m == 1:
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
        xi_a = np.column_stack([np.cos(theta), np.sin(theta)])
        xi_b = np.column_stack([-np.sin(theta), np.cos(theta)])
        h_a = np.arccosh(1.0 + u * (np.cosh(h_cap) - 1.0))
        total = 2.0 * np.pi * (np.cosh(h_cap) - 1.0)
    else:
        normal = rng.normal(size=(n, 3))
        normal /= np.linalg.norm(normal, axis=1, keepdims=True)
        seed_vec = np.eye(3)[np.argmin(np.abs(normal), axis=1)]
        e1 = seed_vec - np.sum(seed_vec * normal, axis=1, keepdims=True) * normal
        e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
        e2 = np.cross(normal, e1)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
        xi_a = np.cos(theta)[:, None] * e1 + np.sin(theta)[:, None] * e2
        xi_b = -np.sin(theta)[:, None] * e1 + np.cos(theta)[:, None] * e2
        h_a = np.arcsinh(np.sqrt(u) * np.sinh(h_cap))
        total = 2.0 * np.pi**2 * np.sinh(h_cap) ** 2
    return GeodesicSampleSet(m, xi_a, h_a, xi_b, float(h_cap), float(total))


# -- intersection counting ---------------------------------------------------


def _constraint_angles(samples: GeodesicSampleSet, poly: HyperbolicPolytope):
    """Angles of the linear forms whose min gives sign(t - h) along gamma."""
    k = np.tanh(poly.radii)
    dots_a = samples.xi_a @ poly.directions.T
    dots_b = samples.xi_b @ poly.directions.T
    ch, sh = np.cosh(samples.h_a), np.sinh(samples.h_a)
    e_coef = sh[:, None] - k * ch[:, None] * dots_a
    d_coef = k * dots_b
    return np.arctan2(-d_coef, e_coef)


def _arc_spans(phi: np.ndarray):
    """Per row: angular span of the constraint set and the first angle after
    the widest gap (the window start)."""
    srt = np.sort(phi % (2.0 * np.pi), axis=1)
    gaps = np.diff(np.concatenate([srt, srt[:, :1] + 2.0 * np.pi], axis=1), axis=1)
    widest = np.argmax(gaps, axis=1)
    span = 2.0 * np.pi - np.take_along_axis(gaps, widest[:, None], axis=1)[:, 0]
    nxt = (widest + 1) % srt.shape[1]
    start = np.take_along_axis(srt, nxt[:, None], axis=1)[:, 0]
    return span, start


def _poly_crossings(samples: GeodesicSampleSet, poly: HyperbolicPolytope):
    """Count (0 or 2), crossing parameters, and tangency flags per sample."""
    phi = _constraint_angles(samples, poly)
    span, start = _arc_spans(phi)
    tangent = np.abs(span - np.pi) < _TANGENT_TOL
    hits = span < np.pi
    lo = start + span - 0.5 * np.pi
    hi = start + 0.5 * np.pi
    return hits, tangent, lo, hi


def _eta_at(xi_a: np.ndarray, h_a: np.ndarray, xi_b: np.ndarray, s: np.ndarray) -> np.ndarray:
    ch, sh = np.cosh(h_a), np.sinh(h_a)
    x0 = np.cos(s) * sh
    vec = (np.cos(s) * ch)[:, None] * xi_a + np.sin(s)[:, None] * xi_b
    return vec / np.sqrt(1.0 + x0**2)[:, None]


def count_intersections(gamma: GeodesicSample, body, omega=None,
                        n_partition: int = 2048) -> tuple[int, bool]:
    """Number of crossings of gamma with the polar boundary of a body.

    ``body`` is a HyperbolicPolytope (exact cone-arc counting) or a callable
    support function eta -> h (sign-change bracketing on ``n_partition``
    points, then bisection to 1e-10).  ``omega`` optionally restricts counting
    to crossings whose sphere direction satisfies omega(eta) (a predicate).
    Returns (count, unstable); unstable samples graze the boundary and must
    be excluded from Monte-Carlo averages.
    """
    if isinstance(body, HyperbolicPolytope):
        single = GeodesicSampleSet(
            gamma.m, gamma.xi_a[None], np.array([gamma.h_a]), gamma.xi_b[None], 0.0, 0.0
        )
        hits, tangent, lo, hi = _poly_crossings(single, body)
        if tangent[0]:
            return 0, True
        if not hits[0]:
            return 0, False
        roots = [float(lo[0]), float(hi[0])]
    else:
        roots, unstable = _roots_by_bisection(gamma, body, n_partition)
        if unstable:
            return 0, True
    if omega is None:
        return len(roots), False
    count = 0
    for s in roots:
        _, eta = gamma.cylinder(np.asarray(s))
        count += bool(omega(eta))
    return count, False


def _roots_by_bisection(gamma: GeodesicSample, h_fn, n_partition: int):
    def q_at(s_vals: np.ndarray) -> np.ndarray:
        t, eta = gamma.cylinder(s_vals)
        return t - np.asarray(h_fn(np.atleast_2d(eta))).reshape(t.shape)

    s_grid = np.linspace(0.0, 2.0 * np.pi, n_partition, endpoint=False)
    q = q_at(s_grid)
    if (np.abs(q) < 1e-12).any():
        return [], True
    sign = np.sign(q)
    flips = np.nonzero(sign != np.roll(sign, -1))[0]
    roots = []
    for k in flips:
        a = s_grid[k]
        b = a + 2.0 * np.pi / n_partition
        qa = q[k]
        while b - a > 1e-10:
            mid = 0.5 * (a + b)
            qm = float(q_at(np.array([mid]))[0])
            if qa * qm > 0:
                a, qa = mid, qm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    return roots, False


@dataclass(frozen=True)
class CroftonReport:
    """Comparison of an area difference against its kinematic estimate."""

    lhs: float
    rhs: float
    stderr: float
    samples_used: int
    samples_unstable: int
    h_cap: float
    agree: bool
    mean_diff: float
    diff_counts: dict = field(default_factory=dict)
    omega: str = "lower"

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "stderr": self.stderr,
            "samples_used": self.samples_used,
            "samples_unstable": self.samples_unstable,
            "h_cap": self.h_cap,
            "agree": self.agree,
            "mean_diff": self.mean_diff,
            "diff_counts": {str(k): int(v) for k, v in self.diff_counts.items()},
            "omega": self.omega,
        }


def _masked_polar_area(poly: HyperbolicPolytope, grid: QuadratureGrid,
                       mask: np.ndarray) -> float:
    from .densities import f_of_b

    k = np.tanh(poly.radii)
    scores = (grid.nodes @ poly.directions.T) * k
    best = scores.max(axis=1)
    arg = scores.argmax(axis=1)
    density = f_of_b(best, poly.m) / np.cosh(poly.radii[arg])
    return math.fsum(grid.weights[mask] * density[mask])


def crofton_compare(poly1: HyperbolicPolytope, poly2: HyperbolicPolytope,
                    grid: QuadratureGrid, n_samples: int = 100_000,
                    h_cap: float | None = None, seed: int = 0,
                    omega: str = "lower", quadrature_tol: float = 1e-3) -> CroftonReport:
    """Compare polar-area differences of two bodies with the kinematic estimate.

    ``omega`` selects the region: "lower" restricts both boundary graphs to
    the set {h1 < h2}, "full" uses the whole sphere.  The left side is the
    quadrature area difference |Sigma_2| - |Sigma_1|; the right side averages
    per-geodesic count differences.  The agreement flag tests
    |lhs - rhs| <= 3*stderr + quadrature_tol.
    """
    m = poly1.m
    if poly2.m != m:
        raise ValueError("bodies must share the dimension")
    if omega not in ("lower", "full"):
        raise ValueError("omega must be 'lower' or 'full'")
    if h_cap is None:
        h_cap = float(max(poly1.radii.max(), poly2.radii.max()) + 0.5)

    h1 = support_fn(poly1, grid.nodes)
    h2 = support_fn(poly2, grid.nodes)
    mask = (h1 < h2) if omega == "lower" else np.ones(grid.size, dtype=bool)
    lhs = _masked_polar_area(poly2, grid, mask) - _masked_polar_area(poly1, grid, mask)

    samples = sample_geodesics(m, n_samples, h_cap, seed)
    hits1, tan1, lo1, hi1 = _poly_crossings(samples, poly1)
    hits2, tan2, lo2, hi2 = _poly_crossings(samples, poly2)
    unstable = tan1 | tan2

    if omega == "full":
        c1 = 2 * hits1.astype(int)
        c2 = 2 * hits2.astype(int)
    else:
        c1 = np.zeros(len(samples), dtype=int)
        c2 = np.zeros(len(samples), dtype=int)
        for hits, lo, hi, out in ((hits1, lo1, hi1, c1), (hits2, lo2, hi2, c2)):
            idx = np.nonzero(hits)[0]
            for roots in (lo, hi):
                eta = _eta_at(samples.xi_a[idx], samples.h_a[idx],
                              samples.xi_b[idx], roots[idx])
                b1 = (eta @ poly1.directions.T * np.tanh(poly1.radii)).max(axis=1)
                b2 = (eta @ poly2.directions.T * np.tanh(poly2.radii)).max(axis=1)
                unstable[idx] |= np.abs(b1 - b2) < _TANGENT_TOL
                out[idx] += (b1 < b2).astype(int)

    keep = ~unstable
    diff = (c1 - c2)[keep]
    n_used = int(keep.sum())
    if n_used < 2:
        raise ValueError("not enough stable samples")
    factor = _CROFTON_FACTOR[m] * samples.total_measure
    mean = float(diff.mean())
    rhs = factor * mean
    stderr = factor * float(diff.std(ddof=1)) / np.sqrt(n_used)
    agree = abs(lhs - rhs) <= 3.0 * stderr + quadrature_tol
    vals, counts = np.unique(diff, return_counts=True)
    return CroftonReport(
        lhs=float(lhs),
        rhs=float(rhs),
        stderr=float(stderr),
        samples_used=n_used,
        samples_unstable=int(unstable.sum()),
        h_cap=float(h_cap),
        agree=bool(agree),
        mean_diff=mean,
        diff_counts={int(v): int(c) for v, c in zip(vals, counts)},
        omega=omega,
    )

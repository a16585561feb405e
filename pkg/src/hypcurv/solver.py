"""Reconstruction of a convex body from a prescribed discrete curvature measure.

The dual objective

    K(psi) = integral F(phi_psi) d(sigma) + sum_i a_i G(psi_i)

is maximized over potentials psi < 0 by projected gradient ascent with an
Armijo line search.  Its stationarity condition is the per-cell transport
balance

    integral of f(phi) over cell i  =  a_i g(psi_i),

which is the discrete curvature-measure identity (f(phi) = cosh^{m+1} h,
g(psi) = cosh r), so the gradient norm and the relative cell residuals are
two views of the same optimality measure and both gate convergence.  The
objective is not known to be concave (the F part is concave, the G part
convex), so the solver guarantees monotone ascent only and validates global
recovery empirically through round-trips; seeded restarts hedge against
stalls.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bodies import HyperbolicPolytope, from_vertices
from .cells import SupportKernel
from .ctransform import PSI_FLOOR, PotentialVector, kernel_for
from .densities import G_psi, g_psi, g_psi_prime
from .errors import HypcurvError, PreconditionError
from .measures import ConditionReport, DiscreteMeasure, check_conditions
from .minkowski import sphere_measure
from .quadrature import QuadratureGrid, build_grid

DEFAULT_GRID_LEVEL = 6


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the ascent; defaults follow the acceptance suite."""

    grid_level: int | None = None          # None -> 6 (4096 nodes m=1, 40962 m=2)
    tol_grad: float | None = None          # None -> 1e-8 * mu(S^m)
    tol_el: float = 1e-6                   # max relative cell residual
    max_iter: int = 5000
    armijo_c1: float = 1e-4
    backtrack: float = 0.5
    step0: float = 1.0
    psi_floor: float = PSI_FLOOR
    seed: int = 0
    restarts: int = 3

    def __post_init__(self):
        if self.tol_el <= 0 or (self.tol_grad is not None and self.tol_grad <= 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter <= 0 or self.step0 <= 0:
            raise ValueError("max_iter and step0 must be positive")
        if not (0 < self.backtrack < 1) or not (0 < self.armijo_c1 < 1):
            raise ValueError("backtrack and armijo_c1 must lie in (0, 1)")


@dataclass
class SolveReport:
    """Everything the solve produced, converged or not."""

    psi: PotentialVector
    converged: bool
    iterations: int
    k_history: list = field(default_factory=list)
    grad_norm_history: list = field(default_factory=list)
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    body: HyperbolicPolytope | None = None
    condition_report: ConditionReport | None = None
    clamp_events: int = 0
    restarts_used: int = 0
    grid_level: int = DEFAULT_GRID_LEVEL
    wall_time: float = 0.0
    extraction_error: str | None = None


def _objective_terms(kernel: SupportKernel, mu: DiscreteMeasure, psi: np.ndarray,
                     want_masses: bool):
    masses, f_total = kernel.cell_sums(np.exp(psi), want_objective=True)
    k_val = f_total + math.fsum(mu.weights * G_psi(psi))
    return (k_val, masses) if want_masses else (k_val, None)


def _solver_state(kernel, mu, psi):
    """Objective, cell masses, and the diagonal step scale at psi.

    The returned scale approximates |d grad / d psi| per coordinate (the
    a_i g' term plus the kernel's mass response); directions grad/scale keep
    the ascent first-order but counter the stiffness of the m=2 soft band.
    For m=1 the kernel offers no response and the scale is None.
    """
    masses, f_total, response = kernel.solver_sweep(np.exp(psi), True)
    k_val = f_total + math.fsum(mu.weights * G_psi(psi))
    scale = None
    if response is not None:
        scale = np.maximum(mu.weights * g_psi_prime(psi) + response, 1e-12)
    return k_val, masses, scale


def dual_objective(psi: PotentialVector | np.ndarray, mu: DiscreteMeasure,
                   grid: QuadratureGrid) -> float:
    """K(psi): sphere integral of F(phi) plus the mu-weighted sum of G(psi)."""
    values = psi.values if isinstance(psi, PotentialVector) else np.asarray(psi, float)
    kernel = kernel_for(mu.m, mu.points, grid)
    k_val, _ = _objective_terms(kernel, mu, values, want_masses=False)
    return k_val


def dual_gradient(psi: PotentialVector | np.ndarray, mu: DiscreteMeasure,
                  grid: QuadratureGrid) -> np.ndarray:
    """Gradient of K: component i is a_i g(psi_i) minus the mass of cell i."""
    values = psi.values if isinstance(psi, PotentialVector) else np.asarray(psi, float)
    kernel = kernel_for(mu.m, mu.points, grid)
    masses, _ = kernel.cell_sums(np.exp(values))
    return mu.weights * g_psi(values) - masses


def transport_residuals(psi: PotentialVector | np.ndarray, mu: DiscreteMeasure,
                        grid: QuadratureGrid) -> np.ndarray:
    """Relative per-cell transport balance |cell mass - a_i g(psi_i)| / (a_i g)."""
    values = psi.values if isinstance(psi, PotentialVector) else np.asarray(psi, float)
    kernel = kernel_for(mu.m, mu.points, grid)
    masses, _ = kernel.cell_sums(np.exp(values))
    target = mu.weights * g_psi(values)
    return np.abs(masses - target) / target


def extract_body(psi: PotentialVector, mu: DiscreteMeasure) -> HyperbolicPolytope:
    """Convex body whose radial scale matches the potential: r_i = artanh(e^psi_i).

    At a true maximizer every support direction is an extreme vertex; a
    NonExtremeVertexError here signals a failed optimization or an
    inadmissible measure.
    """
    radii = np.arctanh(np.exp(psi.values))
    return from_vertices(mu.m, mu.points, radii)


def _ball_heuristic_psi(mu: DiscreteMeasure) -> float:
    # r0 solves mu(S^m) = cosh^m(r0) sigma(S^m); guard ratio <= 1 for the
    # force path on measures violating the total-mass condition
    ratio = max(mu.total / sphere_measure(mu.m), 1.0 + 1e-12)
    r0 = np.arccosh(ratio ** (1.0 / mu.m))
    return float(np.log(np.tanh(max(r0, 1e-3))))


def _gradient_at(kernel, mu, psi):
    masses, _ = kernel.cell_sums(np.exp(psi))
    return mu.weights * g_psi(psi) - masses


def _capped_trial(psi: np.ndarray, alpha: float, grad: np.ndarray,
                  floor: float) -> np.ndarray:
    """Projected trial step with a per-coordinate trust region.

    |psi_i| may shrink by at most 4x and grow by at most 4x per step; the
    shrink cap keeps iterates away from the psi -> 0 boundary, where g blows
    up and the grid cannot resolve the near-singular cell mass, so a single
    overeager step would otherwise clamp and stall there.
    """
    upper = np.minimum(0.25 * psi, -floor)
    return np.clip(psi + alpha * grad, 4.0 * psi, upper)


def _ascend(kernel: SupportKernel, mu: DiscreteMeasure, psi0: np.ndarray,
            cfg: SolverConfig, tol_grad: float):
    psi = np.minimum(psi0, -cfg.psi_floor)
    k_val, masses, scale = _solver_state(kernel, mu, psi)
    k_hist: list[float] = []
    g_hist: list[float] = []
    clamps = 0
    step = cfg.step0
    converged = False
    iters = 0
    prev_psi = prev_grad = None

    # phase 1: Armijo-backtracked ascent on K (monotone by construction)
    while iters < cfg.max_iter:
        grad = mu.weights * g_psi(psi) - masses
        gnorm = float(np.abs(grad).max())
        residual = np.abs(grad) / (mu.weights * g_psi(psi))
        k_hist.append(k_val)
        g_hist.append(gnorm)
        iters += 1
        if gnorm <= tol_grad and residual.max() <= cfg.tol_el:
            converged = True
            break
        if scale is not None:
            direction = grad / scale
            alpha = min(step * 2.0, 8.0)
        else:
            direction = grad
            alpha = min(step * 2.0, 1e3)
            if prev_psi is not None:
                # spectral (Barzilai-Borwein) trial step, Armijo-safeguarded
                d_psi = psi - prev_psi
                d_grad = grad - prev_grad
                denom = -float(d_psi @ d_grad)
                if denom > 0:
                    alpha = float(np.clip((d_psi @ d_psi) / denom, 1e-6, 1e3))
            prev_psi, prev_grad = psi, grad
        accepted = False
        while alpha > 1e-14:
            trial = _capped_trial(psi, alpha, direction, cfg.psi_floor)
            delta = trial - psi
            if np.abs(delta).max() == 0.0:
                break
            k_trial, masses_trial, scale_trial = _solver_state(kernel, mu, trial)
            if k_trial >= k_val + cfg.armijo_c1 * float(grad @ delta):
                if np.any(trial >= -cfg.psi_floor):
                    clamps += 1
                psi, k_val, masses, scale = trial, k_trial, masses_trial, scale_trial
                step = alpha
                accepted = True
                break
            alpha *= cfg.backtrack
        if not accepted:
            break

    # phase 2: K is flat to machine precision near the top, but the gradient
    # is still computed to full accuracy; continue with scaled projected-
    # gradient steps, accepted when the residual energy grad' D^-1 grad
    # decreases.  D is frozen on entry so the energy is measured in one fixed
    # metric (monotone for small enough steps near a nondegenerate maximum);
    # the stopping rule still uses the sup norm.
    if not converged:
        frozen = scale if scale is not None else np.ones_like(psi)
        grad = mu.weights * g_psi(psi) - masses
        energy = float(grad @ (grad / frozen))
        alpha = step
        while iters < cfg.max_iter:
            iters += 1
            improved = False
            trial_alpha = min(alpha * 2.0, 8.0 if scale is not None else 1e3)
            direction = grad / frozen
            for _ in range(60):
                trial = _capped_trial(psi, trial_alpha, direction, cfg.psi_floor)
                if np.abs(trial - psi).max() == 0.0:
                    break
                g_trial = _gradient_at(kernel, mu, trial)
                e_trial = float(g_trial @ (g_trial / frozen))
                if e_trial < energy:
                    psi, grad, energy = trial, g_trial, e_trial
                    alpha = trial_alpha
                    improved = True
                    break
                trial_alpha *= 0.5
            if not improved:
                break
            gnorm = float(np.abs(grad).max())
            g_hist.append(gnorm)
            residual = np.abs(grad) / (mu.weights * g_psi(psi))
            if gnorm <= tol_grad and residual.max() <= cfg.tol_el:
                converged = True
                break
        masses, _ = kernel.cell_sums(np.exp(psi))
        k_val = k_hist[-1] if k_hist else dual_objective_raw(kernel, mu, psi)

    residual = np.abs(mu.weights * g_psi(psi) - masses) / (mu.weights * g_psi(psi))
    return psi, k_val, converged, iters, k_hist, g_hist, residual, clamps


def dual_objective_raw(kernel, mu, psi):
    k_val, _ = _objective_terms(kernel, mu, psi, want_masses=False)
    return k_val


def solve(mu: DiscreteMeasure, config: SolverConfig | None = None,
          force: bool = False) -> SolveReport:
    """Reconstruct the convex body whose curvature measure is mu.

    Checks the admissibility conditions first (hard precondition unless
    ``force`` is set), then runs projected gradient ascent from the ball
    heuristic, restarting from seeded perturbations on non-convergence.
    The returned report carries the potential, histories, per-cell residuals
    and, when extraction succeeds, the recovered body.
    """
    cfg = config or SolverConfig()
    start = time.perf_counter()
    mode = "exhaustive" if (mu.m == 1 or mu.size <= 20) else "sampled"
    cond = check_conditions(mu, mode=mode, seed=cfg.seed)
    if not cond.all_ok and not force:
        raise PreconditionError(cond)

    level = DEFAULT_GRID_LEVEL if cfg.grid_level is None else cfg.grid_level
    grid = build_grid(mu.m, level)
    kernel = kernel_for(mu.m, mu.points, grid)
    tol_grad = cfg.tol_grad if cfg.tol_grad is not None else 1e-8 * mu.total

    psi0_base = np.full(mu.size, _ball_heuristic_psi(mu))
    rng = np.random.default_rng(cfg.seed)
    best = None
    restarts_used = 0
    for attempt in range(cfg.restarts + 1):
        psi0 = psi0_base.copy()
        if attempt > 0:
            restarts_used += 1
            psi0 = psi0_base * np.exp(rng.normal(0.0, 0.25, size=mu.size))
        result = _ascend(kernel, mu, psi0, cfg, tol_grad)
        if best is None or result[1] > best[1] or (result[2] and not best[2]):
            best = result
        if best[2]:
            break

    psi_arr, _, converged, iters, k_hist, g_hist, residual, clamps = best
    psi = PotentialVector(mu.m, mu.points, psi_arr)
    report = SolveReport(
        psi=psi,
        converged=converged,
        iterations=iters,
        k_history=k_hist,
        grad_norm_history=g_hist,
        residuals=residual,
        condition_report=cond,
        clamp_events=clamps,
        restarts_used=restarts_used,
        grid_level=level,
        wall_time=time.perf_counter() - start,
    )
    try:
        report.body = extract_body(psi, mu)
    except HypcurvError as exc:
        report.extraction_error = str(exc)
    return report

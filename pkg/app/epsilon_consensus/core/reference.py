import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .defaults import ACTIVE_SET_TOL, DELTA_TOL, SADDLE_TOL
from .exceptions import AssumptionViolation, SaddlePointError, ValidationError
from .graph import CommGraph
from .schedule import Schedule
from ..models.records import SaddlePoint, TraceRecord
from ..problem.instance import ProblemInstance

GRID_POINTS = 2001
SADDLE_PROBES = 1000
# half-width of the one-sided probes used to read off subgradient limits at a kink
KINK_STEP = 1e-7


def _laplacian_terms(g: CommGraph, x: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """v^T (L kron I) x and x^T (L kron I) x over the trailing (N, d) axes"""
    x = np.asarray(x, dtype=float)
    lx = g.apply_laplacian(np.moveaxis(x, -2, 0))
    lx = np.moveaxis(lx, 0, -2)
    return np.sum(v * lx, axis=(-2, -1)), np.sum(x * lx, axis=(-2, -1))


def phi(g: CommGraph, prob: ProblemInstance, x: np.ndarray, v: np.ndarray) -> float:
    """Augmented Lagrangian f~(x) + v^T L x + 1/2 x^T L x"""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    coupling, penalty = _laplacian_terms(g, x, v)
    return float(prob.total_value(x) + coupling + 0.5 * penalty)


def delta_series(g: CommGraph, prob: ProblemInstance, xs: np.ndarray,
                 saddle: SaddlePoint) -> np.ndarray:
    """
    Delta(x) = Phi(x, v*) - Phi(x*, v*) + 1/2 x^T L x for a (..., N, d) stack

    Phi(x*, v*) = f* because L x* = 0, so this reduces to
    f~(x) - f* + v*^T L x + x^T L x.
    """
    xs = np.asarray(xs, dtype=float)
    coupling, penalty = _laplacian_terms(g, xs, saddle.v_star)
    values = prob.total_value(xs) - saddle.f_star + coupling + penalty
    if np.any(values < -DELTA_TOL):
        worst = float(np.min(values))
        raise SaddlePointError(f"Delta is negative ({worst:.3e}); the saddle point is not valid")
    return values


def delta(g: CommGraph, prob: ProblemInstance, x: np.ndarray, saddle: SaddlePoint) -> float:
    """Saddle gap Delta(x) >= 0 at a single primal state"""
    return float(delta_series(g, prob, x, saddle))


def _scalar_objective(prob: ProblemInstance, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    blocks = np.broadcast_to(points[..., None, None], points.shape + (prob.node_count, 1))
    return prob.total_value(blocks)


def _expand(objective, anchor: float, direction: float) -> float:
    """Walk away from anchor until the convex objective stops decreasing"""
    step = 1.0
    current = anchor
    for _ in range(200):
        following = current + direction * step
        if objective(following) >= objective(current):
            return following
        current = following
        step *= 2
    raise ValidationError("Objective appears unbounded below on the feasible set")


def _bracket(objective, lower: float, upper: float) -> Tuple[float, float]:
    if math.isfinite(lower) and math.isfinite(upper):
        return lower, upper
    if math.isfinite(lower):
        return lower, _expand(objective, lower, 1.0)
    if math.isfinite(upper):
        return _expand(objective, upper, -1.0), upper
    return _expand(objective, 0.0, -1.0), _expand(objective, 0.0, 1.0)


def solve_1d(prob: ProblemInstance) -> Tuple[float, float]:
    """
    Minimize sum_i f_i over the interval X = X_1 ∩ ... ∩ X_N

    Grid scan, bounded Brent refinement around the best grid point, then the
    finite endpoints are compared so an active bound is returned exactly. An
    interior optimum is polished with a root search on the exact subgradient
    sum when it changes sign.

    Returns:
        (x*, f*)
    """
    if prob.dimension != 1:
        raise ValidationError(f"solve_1d needs dimension 1, got {prob.dimension}")
    if prob.feasible_set is None:
        raise ValidationError("solve_1d needs interval constraint sets")

    lower = float(prob.feasible_set.lower[0])
    upper = float(prob.feasible_set.upper[0])

    def objective(t: float) -> float:
        return float(_scalar_objective(prob, np.asarray(t)))

    a, b = _bracket(objective, lower, upper)
    if a == b:
        return a, objective(a)

    grid = np.linspace(a, b, GRID_POINTS)
    values = _scalar_objective(prob, grid)
    best = int(np.argmin(values))
    left, right = grid[max(best - 1, 0)], grid[min(best + 1, GRID_POINTS - 1)]
    refined = minimize_scalar(objective, bounds=(left, right), method='bounded',
                              options={'xatol': 1e-12})

    candidates = [c for c in (lower, upper) if math.isfinite(c)]
    candidates += [float(grid[best]), float(refined.x)]
    x_star = min(candidates, key=objective)

    if lower < x_star < upper:
        x_star = _polish(prob, objective, x_star, lower, upper)
    return x_star, objective(x_star)


def _subgradient_sum(prob: ProblemInstance, t: float) -> float:
    return float(np.sum(prob.subgradients(np.full((prob.node_count, 1), t), 0.0)))


def _polish(prob: ProblemInstance, objective, x: float, lower: float, upper: float) -> float:
    h = 1e-6 * max(1.0, abs(x))
    left, right = max(lower, x - h), min(upper, x + h)
    if _subgradient_sum(prob, left) < 0 < _subgradient_sum(prob, right):
        root = brentq(lambda t: _subgradient_sum(prob, t), left, right, xtol=1e-15)
        if objective(root) <= objective(x):
            return root
    return x


def _one_sided_subgradients(prob: ProblemInstance, x: float, side: float) -> np.ndarray:
    """Limit of the exact subgradient selection as t -> x from one side"""
    near = np.full((prob.node_count, 1), x + side * KINK_STEP)
    far = np.full((prob.node_count, 1), x + 2 * side * KINK_STEP)
    # linear extrapolation removes the slope of piecewise-linear selections
    return (2 * prob.subgradients(near, 0.0) - prob.subgradients(far, 0.0))[:, 0]


def _balance(prob: ProblemInstance, x_star: float) -> Tuple[np.ndarray, np.ndarray]:
    """Pick g_i* in the subdifferential and normal-cone multipliers with sum zero"""
    n = prob.node_count
    lower, upper = prob.bounds
    at_lower = np.abs(x_star - lower[:, 0]) <= ACTIVE_SET_TOL
    at_upper = np.abs(upper[:, 0] - x_star) <= ACTIVE_SET_TOL

    subgradients = prob.subgradients(np.full((n, 1), x_star), 0.0)[:, 0]
    multipliers = np.zeros(n)
    scale = max(1.0, float(np.sum(np.abs(subgradients))))
    remainder = -float(np.sum(subgradients))

    if abs(remainder) <= SADDLE_TOL * scale:
        return subgradients, multipliers
    if remainder > 0 and at_upper.any():
        multipliers[at_upper] = remainder / at_upper.sum()
        return subgradients, multipliers
    if remainder < 0 and at_lower.any():
        multipliers[at_lower] = remainder / at_lower.sum()
        return subgradients, multipliers

    # x* sits on a kink of the objective: mix the one-sided limits
    from_left = _one_sided_subgradients(prob, x_star, -1.0)
    from_right = _one_sided_subgradients(prob, x_star, 1.0)
    sum_left, sum_right = float(np.sum(from_left)), float(np.sum(from_right))
    if not (sum_left <= SADDLE_TOL * scale and sum_right >= -SADDLE_TOL * scale) or sum_right == sum_left:
        raise SaddlePointError(
            f"No multiplier assignment balances the subgradients at x* = {x_star:g} "
            f"(sum {-remainder:.6g}, one-sided sums {sum_left:.6g} / {sum_right:.6g})"
        )
    theta = sum_right / (sum_right - sum_left)
    return theta * from_left + (1 - theta) * from_right, multipliers


def solve_saddle(g: CommGraph, prob: ProblemInstance, probes: int = SADDLE_PROBES,
                 seed: int = 0) -> SaddlePoint:
    """
    Build a saddle point (x*, v*) of the augmented Lagrangian

    x* comes from solve_1d. The dual part solves L v* = -(g* + n) in the least
    squares sense and is shifted to mean zero; the right side is orthogonal to
    the all-ones vector by construction. Both saddle inequalities are then
    checked on random probes.
    """
    if prob.dimension != 1 or prob.bounds is None:
        raise ValidationError("solve_saddle needs dimension 1 and interval constraint sets")
    if g.node_count != prob.node_count:
        raise ValidationError(
            f"Graph has {g.node_count} nodes but the problem has {prob.node_count} agents"
        )
    if not g.is_connected():
        raise AssumptionViolation(2, f"the communication graph is disconnected "
                                     f"(components "
                                     f"{[[i + 1 for i in c] for c in g.components()]})")

    point, f_star = solve_1d(prob)
    subgradients, multipliers = _balance(prob, point)

    rhs = -(subgradients + multipliers)
    v_star, *_ = np.linalg.lstsq(g.laplacian(), rhs, rcond=None)
    v_star = v_star - v_star.mean()
    mismatch = float(np.linalg.norm(g.laplacian() @ v_star - rhs))
    if mismatch > SADDLE_TOL * max(1.0, float(np.linalg.norm(rhs))):
        raise SaddlePointError(f"L v* = -(g* + n) has no solution (residual {mismatch:.3e})")

    saddle = SaddlePoint(
        x_star=np.full((prob.node_count, 1), point),
        v_star=v_star[:, None],
        f_star=f_star,
        multipliers=multipliers,
        subgradients=subgradients,
    )
    verify_saddle(g, prob, saddle, probes, seed)
    return saddle


def _probe_box(prob: ProblemInstance, center: np.ndarray, radius: float = 10.0):
    lower, upper = prob.bounds
    low = np.where(np.isfinite(lower), lower, center - radius)
    high = np.where(np.isfinite(upper), upper, center + radius)
    return low, high


def verify_saddle(g: CommGraph, prob: ProblemInstance, saddle: SaddlePoint,
                  probes: int = SADDLE_PROBES, seed: int = 0,
                  tol: float = SADDLE_TOL) -> None:
    """
    Spot-check Phi(x*, v) <= Phi(x*, v*) <= Phi(x, v*) on random probes

    x is drawn over X~ (infinite bounds replaced by a box around x*) and v
    over a box around v*. Raises SaddlePointError on the first violation.
    """
    rng = np.random.default_rng(seed)
    low, high = _probe_box(prob, saddle.x_star)
    xs = rng.uniform(low, high, size=(probes,) + low.shape)
    vs = saddle.v_star + rng.uniform(-10.0, 10.0, size=(probes,) + saddle.v_star.shape)

    center = phi(g, prob, saddle.x_star, saddle.v_star)
    coupling, _ = _laplacian_terms(g, np.broadcast_to(saddle.x_star, vs.shape), vs)
    dual_side = prob.total_value(saddle.x_star) + coupling
    if np.any(dual_side > center + tol):
        raise SaddlePointError("Phi(x*, v) exceeds Phi(x*, v*) at a probe")

    coupling, penalty = _laplacian_terms(g, xs, saddle.v_star)
    primal_side = prob.total_value(xs) + coupling + 0.5 * penalty
    if np.any(primal_side < center - tol):
        worst = float(np.min(primal_side - center))
        raise SaddlePointError(f"Phi(x, v*) falls below Phi(x*, v*) by {-worst:.3e} at a probe")


def distances(trace: List[TraceRecord], saddle: SaddlePoint) -> np.ndarray:
    """||z(k) - z*|| along a trace"""
    z_star = saddle.stacked()
    values = []
    for record in trace:
        z = np.concatenate([record.x.ravel(), record.v.ravel()])
        if z.shape != z_star.shape:
            raise ValidationError(
                f"Trace state has {z.size} entries but the saddle point has {z_star.size}"
            )
        values.append(np.linalg.norm(z - z_star))
    return np.array(values)


def gap_bound_check(trace: List[TraceRecord], saddle: SaddlePoint,
                    alpha: Schedule, eps: Schedule) -> Tuple[bool, float]:
    """
    Fit the smallest C1 >= 0 with

        ||z(k+1) - z*||^2 <= (1 + C1 a_k^2) ||z(k) - z*||^2 - 2 a_k Delta(x(k))
                             + 2 N a_k e_k + C1 a_k^2

    at every recorded k. Each k gives the lower bound
    C1 >= r_k / (a_k^2 (||z(k) - z*||^2 + 1)); the fit is the max over k.

    Returns:
        (holds, fitted_C1); holds is False when no finite C1 covers the trace
    """
    if len(trace) < 2:
        return True, 0.0
    if any(record.delta is None for record in trace[:-1]):
        raise ValidationError("gap_bound_check needs records carrying delta")

    node_count = saddle.x_star.shape[0]
    squared = distances(trace, saddle) ** 2
    fitted = 0.0
    for idx, record in enumerate(trace[:-1]):
        a_k, e_k = alpha(record.k), eps(record.k)
        gap = squared[idx + 1] - squared[idx] + 2 * a_k * record.delta - 2 * node_count * a_k * e_k
        coefficient = a_k ** 2 * (squared[idx] + 1)
        if not math.isfinite(gap):
            return False, math.inf
        if coefficient == 0:
            if gap > DELTA_TOL:
                return False, math.inf
            continue
        fitted = max(fitted, gap / coefficient)
    return True, fitted


def convergence_report(trace: List[TraceRecord], saddle: SaddlePoint,
                       alpha: Optional[Schedule] = None,
                       tail_fraction: float = 0.1) -> Dict[str, Optional[float]]:
    """
    Tail behaviour of a run against a saddle point

    Keys: tail_oscillation (max - min of ||z(k) - z*|| over the tail),
    final_max_deviation, final_consensus_error, final_objective_gap and,
    when alpha is given, weighted_delta_sum = sum_k a_k Delta(x(k)).
    """
    if not trace:
        raise ValidationError("Cannot report on an empty trace")
    if not 0 < tail_fraction <= 1:
        raise ValidationError(f"tail_fraction must be in (0, 1], got {tail_fraction}")

    dist = distances(trace, saddle)
    tail = dist[-math.ceil(tail_fraction * len(dist)):]
    last = trace[-1]
    report = {
        'tail_oscillation': float(tail.max() - tail.min()),
        'final_max_deviation': float(np.max(np.abs(last.x - saddle.x_star))),
        'final_consensus_error': last.consensus_error,
        'final_objective_gap': last.objective_gap,
    }
    if alpha is not None and all(record.delta is not None for record in trace):
        report['weighted_delta_sum'] = float(sum(alpha(r.k) * r.delta for r in trace))
    return report

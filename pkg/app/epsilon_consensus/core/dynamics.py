from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from .exceptions import ValidationError
from .graph import CommGraph
from .schedule import Schedule, check_schedule, run_mode
from .types import Variant
from ..models.records import SaddlePoint, TraceRecord
from ..problem.instance import ProblemInstance
from ..utils.logging import SimulationLogger


@dataclass
class NetworkState:
    """Stacked primal/dual iterate z(k) = col(x(k), v(k)), both (N, d)"""
    x: np.ndarray
    v: np.ndarray
    k: int = 1

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.x.ravel(), self.v.ravel()])

    @classmethod
    def initial(cls, x0, v0=None, dimension: int = 1) -> 'NetworkState':
        """Build z(1); scalar-per-agent inputs are read as (N, 1) blocks"""
        x = as_blocks(x0, dimension)
        v = np.zeros_like(x) if v0 is None else as_blocks(v0, dimension)
        if v.shape != x.shape:
            raise ValidationError(f"v0 has shape {v.shape}, expected {x.shape}")
        return cls(x, v, 1)


@dataclass
class NormalizationConfig:
    """Floor constant c and max-consensus rounds D of the normalized update"""
    c: float = 0.1
    rounds: Optional[int] = None

    def __post_init__(self):
        if not self.c > 0:
            raise ValidationError(f"Normalization floor c must be positive, got {self.c}")
        if self.rounds is not None and self.rounds < 1:
            raise ValidationError(f"Normalization rounds must be >= 1, got {self.rounds}")

    def resolve(self, g: CommGraph) -> 'NormalizationConfig':
        """Fill in D = diameter + 1 when unset and check D >= diameter + 1"""
        minimum = g.diameter() + 1
        rounds = minimum if self.rounds is None else self.rounds
        if rounds < minimum:
            raise ValidationError(
                f"Normalization needs D >= diameter + 1 = {minimum}, got {rounds}"
            )
        return NormalizationConfig(self.c, rounds)


def as_blocks(values, dimension: int = 1) -> np.ndarray:
    """Read per-agent values as an (N, d) float array"""
    arr = np.array(values, dtype=float)
    if arr.ndim == 1:
        if dimension == 1:
            arr = arr[:, None]
        elif arr.size % dimension == 0:
            arr = arr.reshape(-1, dimension)
        else:
            raise ValidationError(f"{arr.size} values cannot be split into blocks of {dimension}")
    if arr.ndim != 2 or arr.shape[1] != dimension:
        raise ValidationError(f"Expected (N, {dimension}) blocks, got shape {arr.shape}")
    return arr


def _check_state(g: CommGraph, prob: ProblemInstance, s: NetworkState) -> None:
    expected = (g.node_count, prob.dimension)
    if g.node_count != prob.node_count:
        raise ValidationError(
            f"Graph has {g.node_count} nodes but the problem has {prob.node_count} agents"
        )
    if s.x.shape != expected or s.v.shape != expected:
        raise ValidationError(
            f"State blocks have shapes {s.x.shape}/{s.v.shape}, expected {expected}"
        )


def _check_step(alpha: float, eps: float) -> None:
    if not alpha > 0:
        raise ValidationError(f"Step size must be positive, got {alpha}")
    if eps < 0:
        raise ValidationError(f"eps must be nonnegative, got {eps}")


def disagreement(g: CommGraph, y: np.ndarray, i: int) -> np.ndarray:
    """x_hat_i = sum_j a_ij (y_i - y_j)"""
    if not 0 <= i < g.node_count:
        raise ValidationError(f"Agent index {i} outside 0..{g.node_count - 1}")
    return g.disagreement(np.asarray(y, dtype=float).reshape(g.node_count, -1), i)


def _operator_blocks(g: CommGraph, prob: ProblemInstance, s: NetworkState,
                     eps: float) -> Tuple[np.ndarray, np.ndarray]:
    """Top and bottom (N, d) blocks of T_eps(z): g + Lv + Lx and -Lx"""
    d = s.x.shape[1]
    # one pass over [x | v]; columns do not mix
    both = g.apply_laplacian(np.concatenate([s.x, s.v], axis=1))
    lx, lv = both[:, :d], both[:, d:]
    top = (prob.subgradients(s.x, eps) + lx) + lv
    return top, -lx


def t_operator(g: CommGraph, prob: ProblemInstance, s: NetworkState, eps: float) -> np.ndarray:
    """T_eps(z) = col(g + Lv + Lx, -Lx) as a stacked 2Nd vector"""
    _check_state(g, prob, s)
    if eps < 0:
        raise ValidationError(f"eps must be nonnegative, got {eps}")
    top, bottom = _operator_blocks(g, prob, s, eps)
    return np.concatenate([top.ravel(), bottom.ravel()])


def agent_operator_norms(g: CommGraph, prob: ProblemInstance, s: NetworkState,
                         eps: float) -> np.ndarray:
    """||T^i|| for each agent, with T^i = col(g_i + x_hat_i + v_hat_i, -x_hat_i)"""
    top, bottom = _operator_blocks(g, prob, s, eps)
    return np.linalg.norm(np.concatenate([top, bottom], axis=1), axis=1)


def pd_step(g: CommGraph, prob: ProblemInstance, s: NetworkState,
            alpha: float, eps: float) -> NetworkState:
    """
    One synchronous primal-dual eps-subgradient step, agent by agent

        x_i <- P_{X_i}[x_i - alpha (g_i + x_hat_i + v_hat_i)]
        v_i <- v_i + alpha x_hat_i

    Every agent reads the pre-step state only.
    """
    _check_state(g, prob, s)
    _check_step(alpha, eps)

    x_next = np.empty_like(s.x)
    v_next = np.empty_like(s.v)
    for i in range(g.node_count):
        g_i = prob.oracles[i].eps_subgradient(s.x[i], eps)
        x_hat = g.disagreement(s.x, i)
        v_hat = g.disagreement(s.v, i)
        x_next[i] = prob.sets[i].project(s.x[i] - alpha * ((g_i + x_hat) + v_hat))
        v_next[i] = s.v[i] + alpha * x_hat
    return NetworkState(x_next, v_next, s.k + 1)


def compact_step(g: CommGraph, prob: ProblemInstance, s: NetworkState,
                 alpha: float, eps: float) -> NetworkState:
    """Stacked form z+ = P_{X_bar}[z - alpha T_eps(z)]; X_bar leaves v free"""
    _check_state(g, prob, s)
    _check_step(alpha, eps)
    n, d = s.x.shape
    operator = t_operator(g, prob, s, eps)
    moved = s.stacked() - alpha * operator
    x_next = prob.project(moved[:n * d].reshape(n, d))
    v_next = moved[n * d:].reshape(n, d)
    return NetworkState(x_next, v_next, s.k + 1)


def _block_update(g: CommGraph, prob: ProblemInstance, s: NetworkState,
                  alpha: float, eps: float) -> NetworkState:
    """The compact update written blockwise; same arithmetic per entry, no stacking"""
    top, bottom = _operator_blocks(g, prob, s, eps)
    return NetworkState(prob.project(s.x - alpha * top), s.v - alpha * bottom, s.k + 1)


def _normalized_update(g: CommGraph, prob: ProblemInstance, s: NetworkState, alpha: float,
                       eps: float, norm: NormalizationConfig) -> Tuple[NetworkState, np.ndarray]:
    top, bottom = _operator_blocks(g, prob, s, eps)
    local = np.linalg.norm(np.concatenate([top, bottom], axis=1), axis=1)
    shared = g.max_consensus(local, norm.rounds)
    steps = alpha / np.maximum(norm.c, shared)

    x_next = prob.project(s.x - steps[:, None] * top)
    v_next = s.v - steps[:, None] * bottom
    return NetworkState(x_next, v_next, s.k + 1), steps


def npd_step(g: CommGraph, prob: ProblemInstance, s: NetworkState, alpha: float,
             eps: float, norm: NormalizationConfig) -> NetworkState:
    """
    Componentwise normalized step

    Each agent starts a max-consensus from ||T^i||, runs D rounds and scales
    its step to alpha / max{c, delta_i}. With D >= diameter + 1 every agent
    ends up with the same normalizer.
    """
    _check_state(g, prob, s)
    _check_step(alpha, eps)
    norm = norm.resolve(g)
    state, _ = _normalized_update(g, prob, s, alpha, eps, norm)
    return state


def run(g: CommGraph, prob: ProblemInstance, alpha: Schedule, eps: Schedule,
        x0, v0=None, iters: int = 1000,
        variant: Union[Variant, str] = Variant.PLAIN,
        norm: Optional[NormalizationConfig] = None,
        reference: Optional[SaddlePoint] = None,
        logger: Optional[SimulationLogger] = None,
        progress_every: int = 0) -> List[TraceRecord]:
    """
    Iterate from z(1) and return the trace z(1), ..., z(iters + 1)

    Args:
        g: communication graph
        prob: per-agent oracles and constraint sets
        alpha, eps: step-size and accuracy schedules
        x0, v0: initial primal/dual blocks; v0 defaults to zero
        iters: number of steps (0 returns the initial record only)
        variant: plain or normalized update
        norm: normalization settings for the normalized variant
        reference: saddle point used for objective gap, delta and residual
        logger: structured event logger
        progress_every: emit a PROGRESS event every this many steps (0 = never)
    """
    from .trace import build_trace

    variant = Variant(variant)
    logger = logger or SimulationLogger()
    if iters < 0:
        raise ValidationError(f"iters must be nonnegative, got {iters}")

    state = NetworkState.initial(x0, v0, prob.dimension)
    _check_state(g, prob, state)

    if not prob.is_feasible(state.x):
        projected = prob.project(state.x)
        logger.log_projection_warning(state.x, projected)
        state = NetworkState(projected, state.v, 1)

    logger.log_schedule_verdict(check_schedule(alpha, eps, run_mode(eps)), alpha, eps)

    if variant == Variant.NORMALIZED:
        norm = (norm or NormalizationConfig()).resolve(g)

    n, d = state.x.shape
    xs = np.empty((iters + 1, n, d))
    vs = np.empty((iters + 1, n, d))
    steps_used = np.empty(iters + 1)
    eps_used = np.empty(iters + 1)
    xs[0], vs[0] = state.x, state.v

    for idx in range(iters + 1):
        k = idx + 1
        alpha_k, eps_k = alpha(k), eps(k)
        eps_used[idx] = eps_k
        if variant == Variant.PLAIN:
            steps_used[idx] = alpha_k
            if idx == iters:
                break
            state = _block_update(g, prob, state, alpha_k, eps_k)
        else:
            following, steps = _normalized_update(g, prob, state, alpha_k, eps_k, norm)
            steps_used[idx] = steps.min()
            if idx == iters:
                break
            state = following
        xs[idx + 1], vs[idx + 1] = state.x, state.v

        if progress_every and k % progress_every == 0:
            logger.log_progress(k, float(np.linalg.norm(g.apply_laplacian(state.x))))

    return build_trace(g, prob, xs, vs, steps_used, eps_used, reference)

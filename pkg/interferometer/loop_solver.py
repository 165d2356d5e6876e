"""Self-consistent solution of the fully established feedback loop.

Setting the launched state equal to the left output, ψ_T(t2) = ψ4(t2), in
the two-input output formula gives the loop condition

    ψ4 = -iαβ(G1 + G2)ψ + (α²G2 - β²G1)Mψ4

i.e. the linear system [I - K]ψ4 = b with feedback operator
K = (α²G2 - β²G1)M and drive b = -iαβ(G1 + G2)ψ. This equation is a
reconstruction from the circuit wiring; ψ3 is derived from the solution and
not constrained.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    DEFAULT_COND_LIMIT,
    Operator,
    State,
    apply,
    as_operator,
    as_state,
    norm,
    solve_linear,
)
from .circuit import CircuitConfig, open_loop_pass, two_input_pass
from .exceptions import DimensionMismatch, NoConvergence, Singular

logger = logging.getLogger(__name__)


class SolveMethod(str, enum.Enum):
    DIRECT = 'direct'
    ITERATIVE = 'iterative'


@dataclass(frozen=True, eq=False)
class LoopSolution:
    psi4: State
    psi3: State
    residual: float
    method: SolveMethod
    iterations: Optional[int] = None


def feedback_operator(cfg: CircuitConfig, m: Operator) -> Operator:
    """K = (α²G2 - β²G1)M."""
    m = as_operator(m)
    if m.shape[0] != cfg.dim:
        raise DimensionMismatch(f'M is {m.shape[0]}x{m.shape[0]}, circuit dimension is {cfg.dim}')
    a2 = cfg.splitter.alpha ** 2
    b2 = cfg.splitter.beta ** 2
    return as_operator((a2 * cfg.g2 - b2 * cfg.g1) @ m)


def feedback_gain(cfg: CircuitConfig, m: Operator) -> float:
    """Spectral radius of K; iteration converges iff it is below 1."""
    return float(np.max(np.abs(np.linalg.eigvals(feedback_operator(cfg, m)))))


def loop_drive(cfg: CircuitConfig, psi: State) -> State:
    """b = -iαβ(G1 + G2)ψ, the open-loop left output."""
    return open_loop_pass(cfg, psi).psi4


def loop_residual(cfg: CircuitConfig, m: Operator, psi: State, psi4: State) -> float:
    k = feedback_operator(cfg, m)
    return norm(psi4 - (loop_drive(cfg, psi) + k @ psi4))


def _solution(cfg, m, psi, psi4, method, iterations=None):
    chi = apply(as_operator(m), psi4)
    psi3 = two_input_pass(cfg, psi, chi).psi3
    return LoopSolution(
        psi4=as_state(psi4),
        psi3=psi3,
        residual=loop_residual(cfg, m, psi, psi4),
        method=method,
        iterations=iterations,
    )


def _check_loop_cancellation(system, k, cond_limit):
    """Reject I - K that cancels to rounding noise relative to the scale of K.

    In one dimension the ratio of singular values is always 1, so the smallest
    singular value is measured against max(1, ||K||) instead.
    """
    if cond_limit <= 0:
        raise ValueError('cond_limit must be positive')
    smallest = float(np.linalg.svd(system, compute_uv=False)[-1])
    scale = max(1.0, float(np.linalg.norm(k, 2)))
    if smallest * cond_limit <= scale:
        condition = scale / smallest if smallest > 0.0 else np.inf
        raise Singular(
            f'established loop is singular: I - K cancels (condition estimate {condition:.3e})',
            condition=condition,
        )


def solve_established_loop(cfg: CircuitConfig, m: Operator, psi: State,
                           cond_limit=DEFAULT_COND_LIMIT) -> LoopSolution:
    """Direct solve of [I - K]ψ4 = b; raises ``Singular`` when no unique loop exists."""
    psi = cfg.state(psi)
    k = feedback_operator(cfg, m)
    system = np.eye(cfg.dim, dtype=np.complex128) - k
    _check_loop_cancellation(system, k, cond_limit)
    psi4 = solve_linear(system, loop_drive(cfg, psi), cond_limit)
    solution = _solution(cfg, m, psi, psi4, SolveMethod.DIRECT)
    logger.debug('direct loop solve residual %.3e', solution.residual)
    return solution


def iterate_established_loop(cfg: CircuitConfig, m: Operator, psi: State,
                             tol=1e-12, max_iter=10_000) -> LoopSolution:
    """Fixed-point iteration ψ4 <- b + Kψ4 from the zero state.

    ``iterations`` counts the updates that were still changing the state;
    the update that confirms convergence is not counted.
    """
    if tol <= 0:
        raise ValueError('tol must be positive')
    if max_iter < 1:
        raise ValueError('max_iter must be at least 1')

    psi = cfg.state(psi)
    k = feedback_operator(cfg, m)
    drive = loop_drive(cfg, psi)
    current = np.zeros(cfg.dim, dtype=np.complex128)
    update = np.inf

    for step in range(1, max_iter + 1):
        with np.errstate(over='ignore', invalid='ignore'):
            following = drive + k @ current
            update = float(np.linalg.norm(following - current))
        if not np.isfinite(update):
            raise NoConvergence(f'iteration diverged after {step} steps', iterations=step, last_update=update)
        current = following
        if update < tol:
            logger.debug('loop iteration converged after %d updates', step - 1)
            return _solution(cfg, m, psi, current, SolveMethod.ITERATIVE, iterations=step - 1)

    raise NoConvergence(
        f'no convergence in {max_iter} iterations (last update {update:.3e})',
        iterations=max_iter,
        last_update=update,
    )

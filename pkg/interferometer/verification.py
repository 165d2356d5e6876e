"""Self-check suite behind ``manage.py verify``.

Each check reproduces one output formula or exercises one invariant over
randomized instances drawn from a pinned seed, and returns a ``CheckResult``.
"""
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .algebra import (
    apply,
    identity,
    is_unitary,
    norm,
    norm_sq,
    random_operator,
    random_state,
    random_unitary,
    solve_linear,
    zero_operator,
)
from .circuit import (
    BeamSplitter,
    CircuitConfig,
    closed_form_outputs,
    default_qtltt_params,
    open_loop_pass,
    path_sum_outputs,
    two_input_pass,
)
from .ensemble import monte_carlo
from .exceptions import NonUnitaryWarning, Singular
from .loop_solver import iterate_established_loop, solve_established_loop
from .measurement import Outcome, born_probabilities
from .timetravel import Coherent, Dephased, dephasing_p_left, run_two_pass_protocol

logger = logging.getLogger(__name__)

VERIFY_SEED = 20240611
DIMENSIONS = (1, 2, 4, 8)
CASES = 100

CHECKS = []


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check(name):
    def register(func):
        CHECKS.append((name, func))
        return func
    return register


def _rng(offset):
    return np.random.default_rng(VERIFY_SEED + offset)


def _max_error(*pairs):
    return max(float(np.max(np.abs(a - b))) for a, b in pairs)


def random_circuit(rng, dim, unitary=True):
    """Circuit with a random splitter and Haar (or Gaussian, when not unitary) propagators."""
    splitter = BeamSplitter.from_transmission(float(rng.uniform(0.0, 1.0)))
    if unitary:
        g1, g2 = random_unitary(rng, dim), random_unitary(rng, dim)
    else:
        g1, g2 = random_operator(rng, dim), random_operator(rng, dim)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', NonUnitaryWarning)
        return CircuitConfig(dim=dim, splitter=splitter, g1=g1, g2=g2)


def _result(name, error, limit):
    passed = bool(error <= limit)
    detail = f'max error {error:.2e} (limit {limit:.0e})'
    return CheckResult(name, passed, detail)


@check('open-loop 50:50 split')
def check_open_loop_split():
    cfg = default_qtltt_params(1, identity(1))
    result = open_loop_pass(cfg, [1.0])
    expected = np.array([(1 - 1j) / 2])
    error = _max_error((result.psi3, expected), (result.psi4, expected))
    p_right, p_left = born_probabilities(result)
    error = max(error, abs(p_right - 0.5), abs(p_left - 0.5))
    return _result('open-loop 50:50 split', error, 1e-12)


@check('coherent cancellation')
def check_coherent_cancellation():
    cfg = default_qtltt_params(1, identity(1))
    report = run_two_pass_protocol(cfg, [1.0], Coherent(), rng_seed=0, force_outcome=Outcome.LEFT)
    second = report.second_pass
    error = max(_max_error((second.psi3, np.array([1 - 1j]))), norm(second.psi4), abs(report.paradox - 1.0))
    return _result('coherent cancellation', error, 1e-12)


@check('cancellation for any propagator')
def check_cancellation_generality():
    rng = _rng(1)
    worst = 0.0
    for case in range(CASES):
        dim = DIMENSIONS[case % len(DIMENSIONS)]
        cfg = default_qtltt_params(dim, random_unitary(rng, dim))
        report = run_two_pass_protocol(cfg, random_state(rng, dim), Coherent(), rng_seed=case,
                                       force_outcome=Outcome.LEFT)
        worst = max(worst, norm(report.second_pass.psi4))
    return _result('cancellation for any propagator', worst, 1e-10)


@check('dephasing law')
def check_dephasing_law():
    rng = _rng(2)
    worst = 0.0
    for phi in np.linspace(0.0, 2.0 * math.pi, CASES):
        dim = int(rng.choice(DIMENSIONS))
        cfg = default_qtltt_params(dim, random_unitary(rng, dim))
        report = run_two_pass_protocol(cfg, random_state(rng, dim), Dephased(phi=float(phi)), rng_seed=0,
                                       force_outcome=Outcome.LEFT)
        worst = max(worst, abs((1.0 - report.paradox) - dephasing_p_left(phi)))
    return _result('dephasing law', worst, 1e-10)


@check('staged, path-sum and closed-form outputs agree')
def check_path_sum_oracle():
    rng = _rng(3)
    worst = 0.0
    for case in range(CASES):
        dim = int(rng.integers(1, 9))
        cfg = random_circuit(rng, dim, unitary=False)
        psi, chi = random_state(rng, dim, False), random_state(rng, dim, False)
        staged = two_input_pass(cfg, psi, chi)
        closed3, closed4 = closed_form_outputs(cfg, psi, chi)
        path3, path4 = path_sum_outputs(cfg, psi, chi)
        open_staged = open_loop_pass(cfg, psi)
        open3, open4 = closed_form_outputs(cfg, psi)
        worst = max(worst, _max_error(
            (staged.psi3, closed3), (staged.psi4, closed4),
            (path3, closed3), (path4, closed4),
            (open_staged.psi3, open3), (open_staged.psi4, open4),
        ))
    return _result('staged, path-sum and closed-form outputs agree', worst, 1e-10)


@check('norm conservation')
def check_norm_conservation():
    rng = _rng(4)
    worst = 0.0
    for case in range(CASES):
        dim = int(rng.integers(1, 9))
        cfg = random_circuit(rng, dim)
        psi, chi = random_state(rng, dim, False), random_state(rng, dim, False)
        result = two_input_pass(cfg, psi, chi)
        worst = max(worst, abs(result.output_norm_sq - (norm_sq(psi) + norm_sq(chi))))
    return _result('norm conservation', worst, 1e-10)


@check('algebra: linearity, unitary norm, solve round trip')
def check_algebra():
    rng = _rng(5)
    worst = 0.0
    for case in range(CASES):
        dim = int(rng.integers(1, 9))
        a = random_operator(rng, dim)
        x, y = random_state(rng, dim, False), random_state(rng, dim, False)
        s, t = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        linear = _max_error((apply(a, s * x + t * y), s * apply(a, x) + t * apply(a, y)))
        u = random_unitary(rng, dim)
        preserved = abs(norm_sq(apply(u, x)) - norm_sq(x))
        well_conditioned = np.eye(dim) + 0.25 * random_operator(rng, dim)
        b = random_state(rng, dim, False)
        round_trip = _max_error((apply(well_conditioned, solve_linear(well_conditioned, b)), b))
        worst = max(worst, linear, preserved, round_trip)
        if not is_unitary(u):
            return CheckResult('algebra: linearity, unitary norm, solve round trip', False,
                               f'random unitary failed the unitarity check in case {case}')
    return _result('algebra: linearity, unitary norm, solve round trip', worst, 1e-10)


@check('established loop: direct vs iteration')
def check_loop_agreement():
    rng = _rng(6)
    worst = 0.0
    for case in range(CASES):
        dim = int(rng.integers(1, 9))
        cfg = random_circuit(rng, dim)
        m = 0.9 * random_unitary(rng, dim)
        psi = random_state(rng, dim)
        direct = solve_established_loop(cfg, m, psi)
        iterated = iterate_established_loop(cfg, m, psi, tol=1e-13, max_iter=100_000)
        worst = max(worst, _max_error((direct.psi4, iterated.psi4)), direct.residual / max(1.0, norm(psi)))
    return _result('established loop: direct vs iteration', worst, 1e-10)


@check('established loop: reductions and singular case')
def check_loop_cases():
    cfg = default_qtltt_params(1, identity(1))
    psi = [1.0]
    unit = solve_established_loop(cfg, identity(1), psi)
    error = _max_error((unit.psi4, np.array([(2 - 1j) / 5])))
    no_feedback = solve_established_loop(cfg, zero_operator(1), psi)
    error = max(error, _max_error((no_feedback.psi4, open_loop_pass(cfg, psi).psi4)))
    try:
        solve_established_loop(cfg, -(1 + 1j) * identity(1), psi)
    except Singular:
        singular = True
    else:
        singular = False
    result = _result('established loop: reductions and singular case', error, 1e-12)
    if not singular:
        return CheckResult(result.name, False, 'feedback M = -(1+i)I was not reported singular')
    return result


@check('Monte Carlo trigger rate and paradox')
def check_monte_carlo():
    trials = 100_000
    cfg = default_qtltt_params(1, identity(1))
    report = monte_carlo(cfg, [1.0], Coherent(), trials=trials, seed=VERIFY_SEED, workers=1)
    bound = 3.0 * math.sqrt(0.25 / trials)
    error = abs(report.trigger_frequency - 0.5)
    passed = error <= bound and report.mean_paradox == 1.0
    detail = f'{trials} trials, trigger frequency {report.trigger_frequency:.4f}, mean paradox {report.mean_paradox}'
    return CheckResult('Monte Carlo trigger rate and paradox', passed, detail)


@check('determinism')
def check_determinism():
    cfg = default_qtltt_params(2, random_unitary(_rng(7), 2))
    psi = random_state(_rng(8), 2)
    serial = monte_carlo(cfg, psi, Dephased(phi=1.0), trials=500, seed=11, workers=1)
    repeat = monte_carlo(cfg, psi, Dephased(phi=1.0), trials=500, seed=11, workers=1)
    blocked = monte_carlo(cfg, psi, Dephased(phi=1.0), trials=500, seed=11, workers=3)
    passed = serial == repeat == blocked
    return CheckResult('determinism', passed, 'identical ensembles' if passed else 'ensembles differ')


def run_verification():
    results = []
    for name, func in CHECKS:
        try:
            result = func()
        except Exception as exc:
            logger.exception('verification check %s raised', name)
            result = CheckResult(name, False, f'raised {type(exc).__name__}: {exc}')
        results.append(result)
    return results


def results_table(results) -> str:
    frame = pd.DataFrame(
        [(r.name, 'PASS' if r.passed else 'FAIL', r.detail) for r in results],
        columns=['check', 'status', 'detail'],
    )
    return frame.to_string(index=False)

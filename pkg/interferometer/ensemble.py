"""Monte Carlo ensembles over the two-pass protocol.

Trials are split into contiguous blocks; each block is a Celery task, so the
blocks run in-process when tasks are eager and on workers otherwise. Every
trial draws from its own ``trial_generator(seed, index)`` stream and the
aggregation only adds counts and takes an exactly rounded sum of paradox
values, so the report does not depend on the number of blocks or on the
order in which they finish.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

from django.conf import settings

from .measurement import trial_generator
from .timetravel import InjectionMode, TwoPassProtocol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnsembleReport:
    trials: int
    left_count: int
    right_count: int
    trigger_frequency: float
    mean_paradox: Optional[float]
    seed: int


def tally_block(protocol: TwoPassProtocol, seed: int, start: int, stop: int) -> dict:
    """Run trials ``start..stop-1``; JSON-friendly so it can cross a broker."""
    left = right = 0
    paradoxes = []
    for index in range(start, stop):
        report = protocol.run(trial_generator(seed, index))
        if report.triggered:
            left += 1
            paradoxes.append(report.paradox)
        else:
            right += 1
    return {'left': left, 'right': right, 'paradoxes': paradoxes}


def block_bounds(trials, blocks):
    size, extra = divmod(trials, blocks)
    bounds = []
    start = 0
    for index in range(blocks):
        stop = start + size + (1 if index < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def _dispatch(cfg, psi, mode, trials, seed, blocks):
    from celery import group

    from .serializers import RunConfig, dump_run_config
    from .tasks import run_trial_block

    payload = dump_run_config(RunConfig.from_protocol(cfg, psi, mode, seed=seed, trials=trials))
    jobs = group(run_trial_block.s(payload, start, stop) for start, stop in block_bounds(trials, blocks))
    logger.info('dispatching %d trials in %d blocks', trials, blocks)
    result = jobs.apply_async()
    return [block.get() for block in result.results]


def monte_carlo(cfg, psi, mode: InjectionMode, trials: int, seed: int,
                workers: Optional[int] = None) -> EnsembleReport:
    if trials < 1:
        raise ValueError('trials must be at least 1')
    # ZeroOutput surfaces here, before any block is dispatched.
    protocol = TwoPassProtocol(cfg, psi, mode)

    if workers is None:
        workers = settings.CHRONOLOOP_THREADS
    blocks = max(1, min(workers, trials))
    if blocks == 1:
        tallies = [tally_block(protocol, seed, 0, trials)]
    else:
        tallies = _dispatch(cfg, protocol.psi, mode, trials, seed, blocks)

    left = sum(t['left'] for t in tallies)
    right = sum(t['right'] for t in tallies)
    paradoxes = [value for t in tallies for value in t['paradoxes']]
    mean_paradox = math.fsum(paradoxes) / left if left else None

    return EnsembleReport(
        trials=trials,
        left_count=left,
        right_count=right,
        trigger_frequency=left / trials,
        mean_paradox=mean_paradox,
        seed=seed,
    )

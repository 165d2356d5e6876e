import logging
import math
import warnings

import numpy as np
import pandas as pd
from django.conf import settings
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from . import __version__
from .circuit import open_loop_pass
from .ensemble import monte_carlo
from .exceptions import ConfigError, NonUnitaryWarning
from .loop_solver import feedback_gain, iterate_established_loop, solve_established_loop
from .measurement import Outcome, run_generator
from .serializers import (
    EnsembleReportSerializer,
    LoopSolutionSerializer,
    PassResultSerializer,
    TwoPassReportSerializer,
    config_hash,
    dump_run_config,
    parse_run_config,
)
from .timetravel import Dephased, TwoPassProtocol

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['phi', 'p_left_second', 'paradox']


def render_report(payload) -> str:
    return JSONRenderer().render(payload, renderer_context={'indent': 2}).decode('utf-8')


class ExperimentService:
    @staticmethod
    def load_config(path):
        """
        Read and validate a run configuration file
        """
        try:
            with open(path, 'rb') as stream:
                data = JSONParser().parse(stream)
        except OSError as exc:
            raise ConfigError(f'cannot read config {path}: {exc.strerror}') from exc
        except ParseError as exc:
            raise ConfigError(f'config {path} is not valid JSON: {exc.detail}') from exc

        # The module logger already reports non-unitary propagators.
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', NonUnitaryWarning)
            run_config = parse_run_config(data)
        logger.info('loaded config %s (hash %s)', path, config_hash(run_config)[:12])
        return run_config

    @staticmethod
    def dump_config(run_config):
        return render_report(dump_run_config(run_config))

    @staticmethod
    def envelope(command, run_config, seed, result):
        """
        Wrap a payload with the provenance every report carries
        """
        return {
            'command': command,
            'version': __version__,
            'config_hash': config_hash(run_config),
            'seed': seed,
            'result': result,
        }

    @staticmethod
    def two_pass(run_config, seed=None, force_outcome=None):
        seed = run_config.seed if seed is None else seed
        protocol = TwoPassProtocol(run_config.circuit, run_config.psi, run_config.injection)
        report = protocol.run(run_generator(seed), force_outcome)
        logger.info('two-pass run: outcome %s, triggered %s', report.first_outcome.value, report.triggered)

        result = TwoPassReportSerializer(report).data
        result['injection'] = run_config.injection.mode
        return ExperimentService.envelope('two_pass', run_config, seed, result)

    @staticmethod
    def loop_solve(run_config, iterative=False, tol=1e-12, max_iter=10_000):
        if run_config.m is None:
            raise ConfigError('loop solving requires the feedback propagator m in the config')
        if iterative:
            solution = iterate_established_loop(run_config.circuit, run_config.m, run_config.psi,
                                                tol=tol, max_iter=max_iter)
        else:
            solution = solve_established_loop(run_config.circuit, run_config.m, run_config.psi,
                                              cond_limit=settings.CHRONOLOOP_COND_LIMIT)

        result = LoopSolutionSerializer(solution).data
        result['feedback_gain'] = feedback_gain(run_config.circuit, run_config.m)
        result['open_loop'] = PassResultSerializer(open_loop_pass(run_config.circuit, run_config.psi)).data
        return ExperimentService.envelope('loop_solve', run_config, run_config.seed, result)

    @staticmethod
    def phase_sweep(run_config, points):
        """
        Second-pass left probability and paradox over phases evenly spaced on [0, 2π]
        """
        if points < 2:
            raise ValueError('a phase sweep needs at least two points')
        rows = []
        for phi in np.linspace(0.0, 2.0 * math.pi, points):
            protocol = TwoPassProtocol(run_config.circuit, run_config.psi, Dephased(phi=float(phi)))
            report = protocol.run(run_generator(run_config.seed), force_outcome=Outcome.LEFT)
            rows.append((float(phi), 1.0 - report.paradox, report.paradox))
        return pd.DataFrame(rows, columns=SWEEP_COLUMNS)

    @staticmethod
    def write_sweep(frame, out):
        frame.to_csv(out, index=False, float_format='%.17g', lineterminator='\n')

    @staticmethod
    def monte_carlo(run_config, trials=None, seed=None):
        trials = run_config.trials if trials is None else trials
        seed = run_config.seed if seed is None else seed
        report = monte_carlo(run_config.circuit, run_config.psi, run_config.injection, trials, seed)

        result = EnsembleReportSerializer(report).data
        result['injection'] = run_config.injection.mode
        return ExperimentService.envelope('monte_carlo', run_config, seed, result)

from interferometer.services import ExperimentService, render_report

from ._base import ConfigCommand


class Command(ConfigCommand):
    help = 'Solve the self-consistent established loop for the configured feedback propagator m.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--iterative', action='store_true',
                            help='Use fixed-point iteration instead of the direct solve.')
        parser.add_argument('--tol', type=float, default=1e-12)
        parser.add_argument('--max-iter', type=int, default=10_000)

    def run(self, run_config, **options):
        payload = ExperimentService.loop_solve(
            run_config,
            iterative=options['iterative'],
            tol=options['tol'],
            max_iter=options['max_iter'],
        )
        self.stdout.write(render_report(payload))

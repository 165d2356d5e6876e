from django.core.management.base import CommandError

from interferometer.services import ExperimentService, render_report

from ._base import ConfigCommand


class Command(ConfigCommand):
    help = 'Run a seeded Monte Carlo ensemble of the two-pass protocol.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--trials', type=int, default=None, help='Overrides the config trial count.')
        parser.add_argument('--seed', type=int, default=None, help='Overrides the config seed.')

    def run(self, run_config, **options):
        if options['trials'] is not None and options['trials'] < 1:
            raise CommandError('--trials must be at least 1', returncode=1)
        payload = ExperimentService.monte_carlo(run_config, trials=options['trials'], seed=options['seed'])
        self.stdout.write(render_report(payload))

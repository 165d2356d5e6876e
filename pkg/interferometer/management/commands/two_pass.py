from interferometer.measurement import Outcome
from interferometer.services import ExperimentService, render_report

from ._base import ConfigCommand


class Command(ConfigCommand):
    help = 'Run the two-pass protocol: open-loop pass, collapse, back-injection, second pass.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        force = parser.add_mutually_exclusive_group()
        force.add_argument('--force-left', action='store_const', const=Outcome.LEFT, dest='force',
                           help='Collapse the first pass into the left channel.')
        force.add_argument('--force-right', action='store_const', const=Outcome.RIGHT, dest='force',
                           help='Collapse the first pass into the right channel.')
        parser.add_argument('--seed', type=int, default=None, help='Overrides the config seed.')

    def run(self, run_config, **options):
        payload = ExperimentService.two_pass(run_config, seed=options['seed'], force_outcome=options['force'])
        self.stdout.write(render_report(payload))

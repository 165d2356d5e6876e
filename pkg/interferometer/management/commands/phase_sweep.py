from django.core.management.base import CommandError

from interferometer.services import ExperimentService

from ._base import ConfigCommand


class Command(ConfigCommand):
    help = 'Sweep the injected phase over [0, 2π] and write second-pass probabilities as CSV.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--points', type=int, default=101)
        parser.add_argument('--out', default='-', help="CSV path, or '-' for standard output.")

    def run(self, run_config, **options):
        if options['points'] < 2:
            raise CommandError('--points must be at least 2', returncode=1)
        frame = ExperimentService.phase_sweep(run_config, options['points'])

        if options['out'] == '-':
            self.stdout.write(frame.to_csv(index=False, float_format='%.17g', lineterminator='\n'), ending='')
            return
        try:
            ExperimentService.write_sweep(frame, options['out'])
        except OSError as exc:
            raise CommandError(f"cannot write {options['out']}: {exc}", returncode=1) from exc

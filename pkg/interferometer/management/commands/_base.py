from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from interferometer.exceptions import ChronoloopError
from interferometer.services import ExperimentService


class ConfigCommand(BaseCommand):
    """
    A command driven by a run configuration file
    """

    def add_arguments(self, parser):
        parser.add_argument(
            'config_path', nargs='?', default=None,
            help='Run configuration (JSON). Defaults to CHRONOLOOP_DEFAULT_CONFIG.',
        )
        parser.add_argument(
            '--dump-config', action='store_true',
            help='Print the validated configuration in canonical form and exit.',
        )

    def handle(self, *args, **options):
        path = options['config_path'] or settings.CHRONOLOOP_DEFAULT_CONFIG
        if (options.get('seed') or 0) < 0:
            raise CommandError('--seed must be non-negative', returncode=1)
        try:
            run_config = ExperimentService.load_config(path)
            if options['dump_config']:
                self.stdout.write(ExperimentService.dump_config(run_config))
                return
            self.run(run_config, **options)
        except ChronoloopError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        except ValueError as exc:
            raise CommandError(str(exc), returncode=1) from exc

    def run(self, run_config, **options):
        raise NotImplementedError
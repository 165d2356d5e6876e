from django.core.management.base import BaseCommand, CommandError

from interferometer.exceptions import VerificationFailed
from interferometer.verification import results_table, run_verification


class Command(BaseCommand):
    help = 'Run the invariant suite and the output-formula reproductions.'

    def handle(self, *args, **options):
        results = run_verification()
        self.stdout.write(results_table(results))
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise CommandError(
                f"{len(failed)} check(s) failed: {', '.join(failed)}",
                returncode=VerificationFailed.exit_code,
            )
        self.stdout.write(f'all {len(results)} checks passed')

import logging

from django.core.management.base import CommandError

from lab.management.base import CONFIG_ERROR, VERIFY_FAILURE, LabCommand
from lab.serializers import CheckResultSerializer
from lab.verification import CHECKS, run_check

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Run the invariant suites and write a JSON report of check -> {pass, measured, bound}'
    command_name = 'verify'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--check', action='append', dest='checks',
                            help=f"Repeatable; one of {', '.join(CHECKS)}")
        parser.add_argument('--trials', type=int, default=None,
                            help='Randomized trials per dimension')

    def run(self, options):
        config = self.load_config(options, checks=options.get('checks'), trials=options.get('trials'))
        names = config['checks'] or list(CHECKS)
        unknown = sorted(set(names) - set(CHECKS))
        if unknown:
            raise CommandError(f"Unknown check(s): {', '.join(unknown)}", returncode=CONFIG_ERROR)

        results = self.parallel_map(lambda name: run_check(name, config['seed'], config['trials']), names)
        report = {name: CheckResultSerializer(result).data for name, result in zip(names, results)}
        self.emit_json(report, config.get('out'))

        failed = [name for name, result in report.items() if not result['pass']]
        if failed:
            logger.warning(f"Verification failed: {', '.join(failed)}")
            raise CommandError(f"{len(failed)} check(s) failed: {', '.join(failed)}",
                               returncode=VERIFY_FAILURE)
        logger.info(f'Verification passed: {len(report)} check(s).')

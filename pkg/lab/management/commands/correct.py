import json
import logging
from pathlib import Path

from django.core.management.base import CommandError

from lab.cohomology import diminish
from lab.examples import resolve_rep
from lab.exceptions import NoNormalFormBackend
from lab.groups import group_by_name
from lab.management.base import CONFIG_ERROR, LabCommand
from lab.models import CorrectionRun
from lab.normkit import NormKind
from lab.serializers import AlmostRepSerializer, CorrectionReportSerializer

logger = logging.getLogger(__name__)


def load_rep(path):
    """Read an AlmostRep JSON file and resolve the backend of its presentation."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as error:
        raise CommandError(f'Cannot read {path}: {str(error)}', returncode=CONFIG_ERROR)
    serializer = AlmostRepSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    phi = serializer.validated_data
    return phi, group_by_name(phi.presentation.name)


class Command(LabCommand):
    help = 'Iterate the defect-diminishing correction on an almost-representation'
    command_name = 'correct'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--rep', help="voiculescu:n, bs23:n, perturbed:<group>:<k>:<eps>:<seed> or file:<path>")
        parser.add_argument('--norm', choices=NormKind.values, default=None)
        parser.add_argument('--radius', type=int, default=None)
        parser.add_argument('--max-iters', type=int, default=None, dest='max_iters')
        parser.add_argument('--stall-factor', type=float, default=None, dest='stall_factor')
        parser.add_argument('--dump', default=None, help='Write the corrected map as JSON')
        parser.add_argument('--record', action='store_true', help='Store the run in the database')

    def run(self, options):
        config = self.load_config(
            options,
            rep=options.get('rep'),
            norm=options.get('norm'),
            radius=options.get('radius'),
            max_iters=options.get('max_iters'),
            stall_factor=options.get('stall_factor'),
        )
        selector = config['rep']
        if selector.startswith('file:'):
            phi, group = load_rep(selector[len('file:'):])
        else:
            phi, group = resolve_rep(selector)
        if group is None:
            raise NoNormalFormBackend(f'{phi.presentation.name} has no normal-form backend to correct on')
        radius = config['radius']
        if options.get('radius') is None and group.diameter is not None and group.diameter > radius:
            radius = group.diameter
            logger.info(f'Widened the window on {group.name} to radius {radius}')

        kind = NormKind(config['norm'])
        corrected, report = diminish(
            phi, group,
            radius=radius,
            max_iters=config['max_iters'],
            stall_factor=config['stall_factor'],
            kind=kind,
        )
        data = CorrectionReportSerializer(report).data

        if options.get('dump'):
            Path(options['dump']).write_text(json.dumps(AlmostRepSerializer(corrected).data, indent=2))
        if options.get('record'):
            run = CorrectionRun(rep=selector, norm=kind, radius=radius, seed=config['seed'], **data)
            run.full_clean()
            run.save()
            logger.info(f'Recorded correction run {run.pk}')

        self.emit_json(data, config.get('out'))
        logger.info(
            f'Correction of {selector} finished after {report.iterations} iteration(s): '
            f'{report.defect_before:.3e} -> {report.defect_after:.3e}'
            + (' (stalled)' if report.stalled else '')
        )

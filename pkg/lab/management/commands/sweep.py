import csv
import io
import logging

import numpy as np

from lab.examples import EXAMPLES
from lab.management.base import LabCommand

logger = logging.getLogger(__name__)


def fit_loglog(sizes, values):
    """Least-squares (slope, intercept) of log value against log n, or None."""
    sizes = np.asarray(sizes, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = np.isfinite(values) & (values > 0)
    if mask.sum() < 2:
        return None
    slope, intercept = np.polyfit(np.log(sizes[mask]), np.log(values[mask]), 1)
    return float(slope), float(intercept)


def _format(value):
    if value is None:
        return ''
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f'{float(value):.17g}'


def render_csv(columns, rows):
    """One row per size plus trailing ``slope`` and ``intercept`` rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(row[column]) for column in columns])

    sizes = [row['n'] for row in rows]
    fits = {column: fit_loglog(sizes, [row[column] for row in rows]) for column in columns[1:]}
    for label, position in (('slope', 0), ('intercept', 1)):
        writer.writerow([label] + [
            _format(fits[column][position]) if fits[column] else '' for column in columns[1:]
        ])
    return buffer.getvalue()


class Command(LabCommand):
    help = 'Measure an example family over a grid of sizes and write a CSV table with log-log fits'
    command_name = 'sweep'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--example', help=f"One of {', '.join(sorted(EXAMPLES))}")
        parser.add_argument('--sizes', help="Sizes: 'n', 'a:b:xK' or a comma-separated mix")

    def run(self, options):
        config = self.load_config(options, example=options.get('example'), sizes=options.get('sizes'))
        example = EXAMPLES[config['example']]
        seed = config['seed']

        def measure(task):
            index, n = task
            row = example.measure(n, np.random.default_rng([seed, index]))
            row['n'] = n
            return row

        rows = self.parallel_map(measure, enumerate(config['sizes']))
        self.emit(render_csv(example.columns, rows), config.get('out'))
        logger.info(f'Sweep of {example.name} over {len(rows)} sizes completed.')

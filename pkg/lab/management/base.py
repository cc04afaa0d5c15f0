import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from lab.exceptions import (DimensionMismatch, LabError, MissingGenerator,
                            NoNormalFormBackend, PresentationMismatch,
                            WordSyntaxError)
from lab.serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

VERIFY_FAILURE = 1
CONFIG_ERROR = 2
NUMERICAL_FAILURE = 3

CONFIG_ERRORS = (
    serializers.ValidationError, WordSyntaxError, NoNormalFormBackend,
    PresentationMismatch, MissingGenerator, DimensionMismatch,
)


def _flatten(detail):
    if isinstance(detail, dict):
        return '; '.join(f'{key}: {_flatten(value)}' for key, value in detail.items())
    if isinstance(detail, list):
        return '; '.join(_flatten(item) for item in detail)
    return str(detail)


class LabCommand(BaseCommand):
    """Shared option parsing, config validation and exit-code mapping."""

    command_name = None

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--out', default=None, help="Output path; '-' or omitted for stdout")

    def load_config(self, options, **fields):
        data = {'command': self.command_name, 'seed': options.get('seed'), 'out': options.get('out')}
        data.update(fields)
        data = {key: value for key, value in data.items() if value is not None}
        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f'Invalid configuration: {_flatten(serializer.errors)}',
                               returncode=CONFIG_ERROR)
        return serializer.validated_data

    def handle(self, *args, **options):
        try:
            return self.run(options)
        except CommandError:
            raise
        except CONFIG_ERRORS as error:
            logger.error(f'{self.command_name} rejected its input: {_flatten(getattr(error, "detail", error))}')
            raise CommandError(f'Configuration error: {_flatten(getattr(error, "detail", error))}',
                               returncode=CONFIG_ERROR)
        except (LabError, np.linalg.LinAlgError) as error:
            logger.error(f'{self.command_name} failed: {str(error)}')
            raise CommandError(f'Numerical failure: {str(error)}', returncode=NUMERICAL_FAILURE)

    def run(self, options):
        raise NotImplementedError

    def parallel_map(self, function, items):
        """Order-preserving map over at most ASYMLAB_THREADS worker threads."""
        items = list(items)
        workers = max(1, min(settings.ASYMLAB_THREADS, len(items)))
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(function, items))

    def emit(self, text, out):
        if out in (None, '-'):
            self.stdout.write(text, ending='')
        else:
            Path(out).write_text(text)
            logger.info(f'{self.command_name} wrote {out}')

    def emit_json(self, data, out):
        self.emit(json.dumps(data, indent=2, sort_keys=True) + '\n', out)

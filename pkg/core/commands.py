"""Shared plumbing for the pickspace management commands."""

import json
import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from .exceptions import InvalidInput, PickSpaceError
from .models import Tolerances
from .serializers import jsonable

logger = logging.getLogger(__name__)


def dumps(payload) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, indent=2, allow_nan=False)


class PickSpaceCommand(BaseCommand):
    """Base command: tolerance flags, JSON input/output and exit codes.

    Subclasses implement ``run(**options)`` and return the JSON payload.
    Errors are mapped to ``CommandError`` with return code 1 (invalid
    input), 2 (no complete Pick property / infeasible) or 3 (numerical).
    """

    stealth_options = ('stdin',)

    def add_arguments(self, parser):
        parser.add_argument('--tol-eq', type=float, help='Relative equality tolerance')
        parser.add_argument('--tol-psd', type=float, help='Positive definiteness tolerance')
        parser.add_argument(
            '-o',
            '--output',
            default='-',
            help="Write the JSON report to this path ('-' for stdout)",
        )

    def tolerances(self, options) -> Tolerances:
        return Tolerances.from_settings(tol_eq=options.get('tol_eq'), tol_psd=options.get('tol_psd'))

    def read_json(self, source, options):
        """Load JSON from a path, or from stdin when the path is '-'"""
        try:
            if source == '-':
                stream = options.get('stdin') or sys.stdin
                return json.loads(stream.read())
            return json.loads(Path(source).read_text(encoding='utf-8'))
        except FileNotFoundError as e:
            raise InvalidInput(f"input file not found: {source}") from e
        except OSError as e:
            raise InvalidInput(f"cannot read {source}: {e}") from e
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise InvalidInput(f"{source} is not valid JSON: {e}") from e

    def emit(self, payload, options):
        text = dumps(payload)
        output = options.get('output') or '-'
        if output == '-':
            self.stdout.write(text)
        else:
            Path(output).write_text(text + '\n', encoding='utf-8')
            self.stderr.write(self.style.SUCCESS(f"Report written to {output}"))

    def run(self, **options):
        raise NotImplementedError('subclasses of PickSpaceCommand must provide a run() method')

    def handle(self, *args, **options):
        try:
            payload = self.run(**options)
        except PickSpaceError as e:
            logger.error(f"{type(e).__name__}: {e.msg}")
            self.stderr.write(self.style.ERROR(dumps(e.as_dict())))
            raise CommandError(e.msg or type(e).__name__, returncode=e.exit_code) from e
        except serializers.ValidationError as e:
            logger.error(f"Invalid input: {e.detail}")
            self.stderr.write(self.style.ERROR(dumps({'error': 'ValidationError', 'detail': e.detail})))
            raise CommandError(f"invalid input: {e.detail}", returncode=1) from e
        self.emit(payload, options)

from pathlib import Path

from celery import group

from core.commands import PickSpaceCommand
from core.exceptions import InvalidInput, PickSpaceError
from core.serializers import jsonable, load_gram
from invariants.reports import AnalysisReportService
from invariants.tasks import analyze_gram_document


class Command(PickSpaceCommand):
    help = 'Report every invariant of a Gram matrix: deltas, angular invariants, MQ matrices and the CPP'

    def add_arguments(self, parser):
        parser.add_argument('input', nargs='?', default='-', help="Gram JSON file ('-' for stdin)")
        parser.add_argument('--basepoint', type=int, default=1, help='1-based basepoint for rescaling and Delta')
        parser.add_argument(
            '--emit-points',
            action='store_true',
            help='Include embedding coordinates when the space has the complete Pick property',
        )
        parser.add_argument('--csv', help='Also write the pairwise table to this CSV file')
        parser.add_argument('--batch', help='Analyze every *.json file in this directory')
        super().add_arguments(parser)

    def run(self, **options):
        tol = self.tolerances(options)
        basepoint = options['basepoint'] - 1

        if options['batch']:
            return self.run_batch(Path(options['batch']), basepoint, options, tol)

        G = load_gram(self.read_json(options['input'], options), tol)
        if not 0 <= basepoint < G.n:
            raise InvalidInput(f"basepoint {options['basepoint']} outside 1..{G.n}")
        if options['csv']:
            AnalysisReportService.write_csv(G, options['csv'])
            self.stderr.write(self.style.SUCCESS(f"Pairwise table written to {options['csv']}"))
        return AnalysisReportService.build(G, basepoint=basepoint, emit_points=options['emit_points'])

    def run_batch(self, directory, basepoint, options, tol):
        if not directory.is_dir():
            raise InvalidInput(f"batch directory not found: {directory}")
        files = sorted(directory.glob('*.json'))
        self.stderr.write(f"Analyzing {len(files)} files from {directory}")

        results = {}
        signatures = []
        for path in files:
            try:
                payload = self.read_json(str(path), options)
            except PickSpaceError as e:
                results[path.name] = {
                    'source': path.name,
                    'status': 'error',
                    'exit_code': e.exit_code,
                    'error': jsonable(e),
                }
                continue
            signatures.append(
                analyze_gram_document.s(
                    payload,
                    source=path.name,
                    basepoint=basepoint,
                    emit_points=options['emit_points'],
                    tolerances=tol.as_dict(),
                )
            )
        if signatures:
            results.update((r['source'], r) for r in group(signatures).apply_async().get())

        failed = sum(1 for r in results.values() if r['status'] != 'success')
        if failed:
            self.stderr.write(self.style.WARNING(f"{failed} of {len(files)} files failed"))
        return {'batch': str(directory), 'results': dict(sorted(results.items()))}

from core.commands import PickSpaceCommand
from core.serializers import load_gram
from embedding.services import embed_from_invariants, embed_with_certificate
from hyperbolic.serializers import PointSetSerializer
from invariants.serializers import InvariantDataSerializer


class Command(PickSpaceCommand):
    help = 'Embed a complete Pick space as a point set in the unit ball'

    def add_arguments(self, parser):
        parser.add_argument('input', help="Gram JSON file ('-' for stdin)")
        parser.add_argument(
            '--from-invariants',
            action='store_true',
            help='Read InvariantData JSON (deltas and angular invariants) instead of a Gram matrix',
        )
        super().add_arguments(parser)

    def run(self, **options):
        tol = self.tolerances(options)
        payload = self.read_json(options['input'], options)

        if options['from_invariants']:
            serializer = InvariantDataSerializer(data=payload)
            serializer.is_valid(raise_exception=True)
            points = embed_from_invariants(serializer.save(), tol)
            return {
                **PointSetSerializer(points).data,
                'certificate': {'cpp': True},
                'tolerances': tol.as_dict(),
            }

        result = embed_with_certificate(load_gram(payload, tol))
        self.stderr.write(f"Embedded {result.points.n} points in C^{result.points.d}")
        return {
            **PointSetSerializer(result.points).data,
            'certificate': result.certificate(),
            'tolerances': tol.as_dict(),
        }

from core.commands import PickSpaceCommand
from core.serializers import GramSerializer, load_gram
from multalg.serializers import HartzDataSerializer
from multalg.services import hartz_data, reconstruct_from_hartz


class Command(PickSpaceCommand):
    help = 'Compute the extremal multiplier data of a Gram matrix, or rebuild the Gram matrix from it'

    def add_arguments(self, parser):
        parser.add_argument('input', help="Gram JSON file, or HartzData JSON with --reconstruct")
        parser.add_argument(
            '--reconstruct',
            action='store_true',
            help='Read HartzData and emit the reconstructed Gram matrix',
        )
        super().add_arguments(parser)

    def run(self, **options):
        tol = self.tolerances(options)
        payload = self.read_json(options['input'], options)

        if options['reconstruct']:
            serializer = HartzDataSerializer(data=payload)
            serializer.is_valid(raise_exception=True)
            G = reconstruct_from_hartz(serializer.save(), tol)
            return {'gram': GramSerializer(G).data, 'tolerances': tol.as_dict()}

        H = hartz_data(load_gram(payload, tol))
        return {**HartzDataSerializer(H).data, 'tolerances': tol.as_dict()}

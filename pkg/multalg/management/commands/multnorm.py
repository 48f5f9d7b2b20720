from core.commands import PickSpaceCommand
from core.serializers import load_gram
from multalg.serializers import MultiplierSymbolSerializer
from multalg.services import multiplier_norm_report


class Command(PickSpaceCommand):
    help = 'Operator norm of a multiplier given by its values on the points of a Gram matrix'

    def add_arguments(self, parser):
        parser.add_argument('gram', help='Gram JSON file')
        parser.add_argument('symbol', help='Symbol JSON file: {"values": [[re, im], ...]}')
        super().add_arguments(parser)

    def run(self, **options):
        tol = self.tolerances(options)
        G = load_gram(self.read_json(options['gram'], options), tol)
        serializer = MultiplierSymbolSerializer(data=self.read_json(options['symbol'], options))
        serializer.is_valid(raise_exception=True)
        report = multiplier_norm_report(G, serializer.save())
        return {'norm': report.norm, 'jitter': report.jitter, 'tolerances': tol.as_dict()}

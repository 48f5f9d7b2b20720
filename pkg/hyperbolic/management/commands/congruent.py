from core.commands import PickSpaceCommand
from core.exceptions import SizeMismatch
from core.linalg import matrices_close
from hyperbolic.serializers import PointSetSerializer, load_points
from hyperbolic.services import normal_form


class Command(PickSpaceCommand):
    help = 'Decide whether two ordered point sets are congruent under ball automorphisms'

    def add_arguments(self, parser):
        parser.add_argument('first', help='PointSet JSON file')
        parser.add_argument('second', help='PointSet JSON file')
        super().add_arguments(parser)

    def run(self, **options):
        tol = self.tolerances(options)
        X = load_points(self.read_json(options['first'], options))
        Y = load_points(self.read_json(options['second'], options))
        if X.n != Y.n:
            raise SizeMismatch(f"configurations of sizes {X.n} and {Y.n}")

        NX = normal_form(X, tol)
        NY = normal_form(Y, tol)
        d = max(NX.points.d, NY.points.d)
        verdict = matrices_close(NX.points.padded(d), NY.points.padded(d), tol.tol_eq)
        return {
            'congruent': bool(verdict),
            'normal_forms': [
                PointSetSerializer(NX.points).data,
                PointSetSerializer(NY.points).data,
            ],
            'conditions': [NX.condition, NY.condition],
            'tolerances': tol.as_dict(),
        }

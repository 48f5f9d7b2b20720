from classify.services import (
    classify_points,
    classify_triple,
    is_r_pick,
    lies_in_geodesic,
    lies_in_real_disk,
    lies_in_totally_real,
    projected_area,
)
from core.commands import PickSpaceCommand
from hyperbolic.serializers import load_points
from hyperbolic.services import gram_from_points


class Command(PickSpaceCommand):
    help = 'Classify a point configuration in the unit ball'

    def add_arguments(self, parser):
        parser.add_argument('input', help="PointSet JSON file ('-' for stdin)")
        super().add_arguments(parser)

    def run(self, **options):
        tol = self.tolerances(options)
        X = load_points(self.read_json(options['input'], options))

        if X.n == 3:
            report = classify_triple(X, tol).as_dict()
            report['projected_area'] = projected_area(X, tol)
        else:
            report = classify_points(X, tol).as_dict()
            report['r_pick'] = is_r_pick(gram_from_points(X, tol)) if X.n >= 2 else True

        report.update(
            {
                'geodesic': lies_in_geodesic(X, tol),
                'totally_real': lies_in_totally_real(X, tol),
                'real_disk': lies_in_real_disk(X, tol),
                'tolerances': tol.as_dict(),
            }
        )
        return report

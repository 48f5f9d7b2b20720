import numpy as np

from core.commands import PickSpaceCommand
from core.exceptions import InvalidInput
from core.linalg import matrices_close
from core.serializers import GramSerializer
from hyperbolic.serializers import PointSetSerializer
from hyperbolic.services import gram_from_points
from invariants.services import has_cpp
from trees.models import NormMode, TreeFunction, TreeWeight
from trees.serializers import load_tree
from trees.services import (
    distance_kernel,
    gromov_kernel,
    power_kernel,
    spine_embedding,
    summation_by_parts_check,
    tree_kernel,
    tree_norm,
)


class Command(PickSpaceCommand):
    help = 'Build the kernel, spine embedding and norm checks of a weighted rooted tree'

    def add_arguments(self, parser):
        parser.add_argument('input', help="Tree JSON file ('-' for stdin)")
        parser.add_argument('--lambda', dest='Lambda', type=float, help='Use Omega = Lambda ** d(o, x)')
        parser.add_argument('--gamma', type=float, help='Also report the distance kernel Gamma ** d(x, y)')
        parser.add_argument('--power', type=float, help='Raise the tree kernel entrywise to this power')
        parser.add_argument('--seed', type=int, default=0, help='Seed of the test function for the norm checks')
        super().add_arguments(parser)

    def run(self, **options):
        tol = self.tolerances(options)
        tree, weight = load_tree(self.read_json(options['input'], options))

        if options['Lambda'] is not None:
            G = gromov_kernel(tree, options['Lambda'], tol)
            weight = TreeWeight(G.diagonal)
        elif weight is not None:
            G = tree_kernel(tree, weight, tol)
        else:
            raise InvalidInput("the tree needs an omega array or --lambda")

        points = spine_embedding(tree, weight)
        spine_ok = matrices_close(G.K, gram_from_points(points, tol).K, tol.tol_eq)

        rng = np.random.default_rng(options['seed'])
        f = TreeFunction(rng.standard_normal(tree.V) + 1j * rng.standard_normal(tree.V))
        lhs, rhs = summation_by_parts_check(tree, TreeFunction(weight.omega_big), f)
        coefficient_norm = tree_norm(tree, weight, f, NormMode.COEFFICIENTS)
        value_norm = tree_norm(tree, weight, TreeFunction(G.K @ f.values), NormMode.VALUES)

        report = {
            'gram': GramSerializer(G).data,
            'embedding': PointSetSerializer(points).data,
            'checks': {
                'spine_gram': bool(spine_ok),
                'summation_by_parts': [lhs, rhs],
                'norms': {'coefficients': coefficient_norm, 'values': value_norm},
                'cpp': bool(has_cpp(G)),
            },
            'tolerances': tol.as_dict(),
        }
        if options['gamma'] is not None:
            report['distance_kernel'] = GramSerializer(distance_kernel(tree, options['gamma'], tol)).data
        if options['power'] is not None:
            powered = power_kernel(G, options['power'])
            report['power_kernel'] = {'gram': GramSerializer(powered).data, 'cpp': bool(has_cpp(powered))}
        return report

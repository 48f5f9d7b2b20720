"""The full invariant report behind the analyze command."""

import itertools
import logging

import numpy as np
import pandas as pd

from core.exceptions import CPPFailure, DegenerateArg, SingularSystem
from core.models import GramSpace
from core.serializers import GramSerializer
from core.services import basepoint_rescale, gram_report, normalized_entries

from .serializers import DeltaDataSerializer, index_key
from .services import (
    angular_invariant,
    capital_delta,
    delta_matrix,
    frak_d,
    has_cpp,
    lf,
    pi_half_holds,
    sti_holds,
)

logger = logging.getLogger(__name__)


class AnalysisReportService:
    @staticmethod
    def pairwise_table(G: GramSpace) -> pd.DataFrame:
        """One row per pair i < j (1-based) with delta and the normalized kernel entry"""
        D = delta_matrix(G)
        khat = normalized_entries(G)
        rows = [
            {
                'i': i + 1,
                'j': j + 1,
                'delta': float(D[i, j]),
                'khat_abs': float(abs(khat[i, j])),
                'khat_arg': float(np.angle(khat[i, j])),
            }
            for i, j in itertools.combinations(range(G.n), 2)
        ]
        return pd.DataFrame(rows, columns=['i', 'j', 'delta', 'khat_abs', 'khat_arg'])

    @staticmethod
    def write_csv(G: GramSpace, path: str) -> str:
        AnalysisReportService.pairwise_table(G).to_csv(path, index=False, float_format='%.17g')
        return path

    @staticmethod
    def build(G: GramSpace, basepoint: int = 0, emit_points: bool = False) -> dict:
        """Invariants, the CPP verdict and, for CPP spaces, the Delta data and embedding"""
        triples = list(itertools.combinations(range(G.n), 3))

        angulars, footprints = {}, {}
        for i, j, k in triples:
            try:
                angulars[index_key((i, j, k))] = angular_invariant(G, i, j, k)
            except DegenerateArg:
                angulars[index_key((i, j, k))] = None
            footprints[index_key((i, j, k))] = lf(G, i, j, k)

        sti_failures = [
            index_key(t) for t in triples if not all(sti_holds(G, *p) for p in itertools.permutations(t))
        ]

        capital = {}
        others = [v for v in range(G.n) if v != basepoint]
        for y, z in itertools.combinations(others, 2):
            key = f"{basepoint + 1};{y + 1},{z + 1}"
            try:
                capital[key] = capital_delta(G, basepoint, y, z)
            except SingularSystem:
                capital[key] = None

        try:
            pi_half = pi_half_holds(G)
        except DegenerateArg:
            pi_half = None

        certificate = has_cpp(G)
        D = delta_matrix(G)
        report = {
            'n': G.n,
            'basepoint': basepoint + 1,
            'tolerances': G.tol.as_dict(),
            'validation': gram_report(G.K, G.tol).as_dict(),
            'rescaled': GramSerializer(basepoint_rescale(G, basepoint)).data,
            'deltas': {index_key(p): float(D[p]) for p in itertools.combinations(range(G.n), 2)},
            'angulars': angulars,
            'lf': footprints,
            'sti': {'holds': not sti_failures, 'failures': sti_failures},
            'pi_half': pi_half,
            'cpp': bool(certificate),
            'certificate': certificate.as_dict(),
            'capital_deltas': capital,
        }

        if certificate:
            report['delta_data'] = DeltaDataSerializer(frak_d(G)).data
            if emit_points:
                from embedding.services import embed_with_certificate
                from hyperbolic.serializers import PointSetSerializer

                try:
                    result = embed_with_certificate(G)
                    report['points'] = PointSetSerializer(result.points).data
                    report['embedding'] = result.certificate()
                except CPPFailure as e:
                    logger.warning(f"Embedding failed on a space certified CPP: {e.msg}")
                    report['embedding'] = e.as_dict()
        logger.debug(f"Analyzed a {G.n}-point space: cpp={report['cpp']}, sti={report['sti']['holds']}")
        return report


pairwise_table = AnalysisReportService.pairwise_table
write_csv = AnalysisReportService.write_csv
build_report = AnalysisReportService.build

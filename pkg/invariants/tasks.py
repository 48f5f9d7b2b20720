import logging

from celery import shared_task

from core.exceptions import PickSpaceError
from core.models import Tolerances
from core.serializers import jsonable, load_gram

from .reports import AnalysisReportService

logger = logging.getLogger(__name__)


@shared_task(bind=True)
def analyze_gram_document(self, payload, source='', basepoint=0, emit_points=False, tolerances=None):
    """
    Analyze one Gram JSON document. Failures are reported in the result
    instead of raised
    """
    try:
        tol = Tolerances(**tolerances) if tolerances else Tolerances()
        G = load_gram(payload, tol)
        report = AnalysisReportService.build(G, basepoint=basepoint, emit_points=emit_points)
        logger.info(f"Analyzed {source or 'document'}: n={G.n}, cpp={report['cpp']}")
        return {'source': source, 'status': 'success', 'report': jsonable(report)}
    except PickSpaceError as e:
        logger.error(f"Analysis of {source or 'document'} failed: {e.msg}")
        return {'source': source, 'status': 'error', 'exit_code': e.exit_code, 'error': jsonable(e)}
    except Exception as e:
        logger.error(f"Analysis of {source or 'document'} failed: {e}")
        return {'source': source, 'status': 'error', 'exit_code': 1, 'error': {'message': str(e)}}

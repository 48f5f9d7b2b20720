import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.tests.factories import bergman_matrix, gram_payload, random_points
from hyperbolic.services import gram_from_points
from invariants.reports import build_report, pairwise_table
from invariants.tasks import analyze_gram_document


class AnalysisReportTest(SimpleTestCase):
    def setUp(self):
        self.G = gram_from_points(random_points(np.random.default_rng(21), 4, 2))

    def test_pairwise_table(self):
        """Test one row per pair with 1-based indices"""
        table = pairwise_table(self.G)
        self.assertIsInstance(table, pd.DataFrame)
        self.assertEqual(len(table), 6)
        self.assertEqual(list(table.columns), ['i', 'j', 'delta', 'khat_abs', 'khat_arg'])
        self.assertEqual((table.iloc[0]['i'], table.iloc[0]['j']), (1, 2))
        np.testing.assert_allclose(table['delta'] ** 2 + table['khat_abs'] ** 2, 1.0)

    def test_report_on_cpp_space(self):
        """Test the report sections of a space with the complete Pick property"""
        report = build_report(self.G, basepoint=1, emit_points=True)
        self.assertTrue(report['cpp'])
        self.assertTrue(report['sti']['holds'])
        self.assertEqual(report['basepoint'], 2)
        self.assertEqual(set(report['capital_deltas']), {'2;1,3', '2;1,4', '2;3,4'})
        self.assertIn('delta_data', report)
        self.assertEqual(len(report['points']['points']), 4)

    def test_report_on_bergman_space(self):
        """Test that the Bergman triple reports STI failure and no CPP"""
        from core.services import validate_gram

        report = build_report(validate_gram(bergman_matrix(0.1)))
        self.assertFalse(report['cpp'])
        self.assertEqual(report['sti']['failures'], ['1,2,3'])
        self.assertNotIn('delta_data', report)


class AnalyzeTaskTest(SimpleTestCase):
    def test_success(self):
        """Test the task result for a valid document"""
        result = analyze_gram_document(gram_payload(bergman_matrix(0.5)), source='bergman.json')
        self.assertEqual(result['status'], 'success')
        self.assertFalse(result['report']['cpp'])
        json.dumps(result)

    def test_failure_is_reported(self):
        """Test that invalid documents are reported instead of raised"""
        result = analyze_gram_document(gram_payload(np.eye(2)), source='reducible.json')
        self.assertEqual(result['status'], 'error')
        self.assertEqual(result['exit_code'], 1)
        self.assertEqual(result['error']['error'], 'Reducible')


@pytest.mark.integration
class AnalyzeCommandTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.path = self.dir / 'space.json'
        self.path.write_text(json.dumps(gram_payload(bergman_matrix(0.5))))

    def test_report_to_stdout(self):
        """Test the JSON report of analyze"""
        out = StringIO()
        call_command('analyze', str(self.path), stdout=out, stderr=StringIO())
        report = json.loads(out.getvalue())
        self.assertEqual(report['n'], 3)
        self.assertFalse(report['cpp'])
        self.assertAlmostEqual(report['deltas']['1,2'] ** 2, 0.4375, places=10)

    def test_stdin_input(self):
        """Test reading the Gram document from stdin"""
        out = StringIO()
        call_command('analyze', '-', stdin=StringIO(self.path.read_text()), stdout=out, stderr=StringIO())
        self.assertEqual(json.loads(out.getvalue())['n'], 3)

    def test_csv_output(self):
        """Test the pairwise CSV written with --csv"""
        target = self.dir / 'pairs.csv'
        call_command('analyze', str(self.path), csv=str(target), stdout=StringIO(), stderr=StringIO())
        table = pd.read_csv(target)
        self.assertEqual(len(table), 3)

    def test_basepoint_out_of_range(self):
        """Test exit code 1 for a basepoint outside the space"""
        with self.assertRaises(CommandError) as cm:
            call_command('analyze', str(self.path), basepoint=4, stdout=StringIO(), stderr=StringIO())
        self.assertEqual(cm.exception.returncode, 1)

    def test_missing_file(self):
        """Test exit code 1 for a missing input file"""
        with self.assertRaises(CommandError) as cm:
            call_command('analyze', str(self.dir / 'missing.json'), stdout=StringIO(), stderr=StringIO())
        self.assertEqual(cm.exception.returncode, 1)

    def test_batch(self):
        """Test batch analysis through the task group"""
        (self.dir / 'bad.json').write_text(json.dumps(gram_payload(np.eye(2))))
        out = StringIO()
        call_command('analyze', batch=str(self.dir), stdout=out, stderr=StringIO())
        results = json.loads(out.getvalue())['results']
        self.assertEqual(results['space.json']['status'], 'success')
        self.assertEqual(results['bad.json']['status'], 'error')

    def test_batch_with_malformed_file(self):
        """Test that a file that is not JSON fails alone with exit code 1"""
        (self.dir / 'broken.json').write_text('{"n": 2, "K": [')
        disk = gram_from_points(random_points(np.random.default_rng(3), 3, 1))
        (self.dir / 'disk.json').write_text(json.dumps(gram_payload(disk.K)))
        out = StringIO()
        err = StringIO()
        call_command('analyze', batch=str(self.dir), stdout=out, stderr=err)
        results = json.loads(out.getvalue())['results']
        self.assertEqual(list(results), ['broken.json', 'disk.json', 'space.json'])
        self.assertEqual(results['broken.json']['status'], 'error')
        self.assertEqual(results['broken.json']['exit_code'], 1)
        self.assertEqual(results['disk.json']['status'], 'success')
        self.assertTrue(results['disk.json']['report']['cpp'])
        self.assertEqual(results['space.json']['status'], 'success')
        self.assertIn('1 of 3 files failed', err.getvalue())
